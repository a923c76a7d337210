# -*- coding: utf-8 -*-
"""Definitions."""

ATTRIBUTE_COUNTRY = 'country'
ATTRIBUTE_GENDER = 'gender'
ATTRIBUTE_RACE = 'race'

# Attributes that can be subject to a fairness constraint.
PROTECTED_ATTRIBUTES = (ATTRIBUTE_RACE, ATTRIBUTE_COUNTRY)

CAREER_STAGE_ASSOCIATE_PROFESSOR = 'associate_professor'
CAREER_STAGE_INDUSTRY = 'industry'
CAREER_STAGE_LECTURER = 'lecturer'
CAREER_STAGE_POSTDOC = 'postdoc'
CAREER_STAGE_PROFESSOR = 'professor'
CAREER_STAGE_STUDENT = 'student'

# The order determines the one-hot column order and dominant stage ties.
CAREER_STAGES = (
    CAREER_STAGE_PROFESSOR,
    CAREER_STAGE_ASSOCIATE_PROFESSOR,
    CAREER_STAGE_LECTURER,
    CAREER_STAGE_POSTDOC,
    CAREER_STAGE_STUDENT,
    CAREER_STAGE_INDUSTRY)

DEFAULT_STAGE_WEIGHTS = {
    CAREER_STAGE_ASSOCIATE_PROFESSOR: 0.65,
    CAREER_STAGE_INDUSTRY: 0.8,
    CAREER_STAGE_LECTURER: 0.8,
    CAREER_STAGE_POSTDOC: 0.9,
    CAREER_STAGE_PROFESSOR: 0.5,
    CAREER_STAGE_STUDENT: 1.0}

CONFERENCE_IUI = 1
CONFERENCE_DIS = 2
CONFERENCE_SIGCHI = 3

CONFERENCE_NAMES = {
    CONFERENCE_IUI: 'IUI',
    CONFERENCE_DIS: 'DIS',
    CONFERENCE_SIGCHI: 'SIGCHI'}

CONFERENCES = frozenset(CONFERENCE_NAMES.keys())

COUNTRY_CLASS_DEVELOPED = 'developed'
COUNTRY_CLASS_UNDERDEVELOPED = 'underdeveloped'

COUNTRY_CLASSES = frozenset([
    COUNTRY_CLASS_DEVELOPED,
    COUNTRY_CLASS_UNDERDEVELOPED])

PROTECTED_COUNTRY_CLASSES = frozenset([COUNTRY_CLASS_UNDERDEVELOPED])

GENDER_MALE = 0
GENDER_FEMALE = 1

GENDERS = frozenset([GENDER_MALE, GENDER_FEMALE])

RACE_ASIAN = 'Asian'
RACE_BLACK = 'Black'
RACE_HISPANIC = 'Hispanic'
RACE_WHITE = 'White'

RACES = frozenset([RACE_ASIAN, RACE_BLACK, RACE_HISPANIC, RACE_WHITE])

PROTECTED_RACES = frozenset([RACE_BLACK, RACE_HISPANIC])

TIER_LOW = 'low'
TIER_MID = 'mid'
TIER_TOP = 'top'

TIERS = (TIER_TOP, TIER_MID, TIER_LOW)

BIAS_LEVEL_FAIR = 'fair'
BIAS_LEVEL_HIGH = 'high'
BIAS_LEVEL_MODERATE = 'moderate'

BIAS_LEVELS = (BIAS_LEVEL_FAIR, BIAS_LEVEL_MODERATE, BIAS_LEVEL_HIGH)

FAIRNESS_MODE_COMBINED = 'combined'
FAIRNESS_MODE_COUNTRY_ONLY = 'country_only'
FAIRNESS_MODE_RACE_ONLY = 'race_only'

FAIRNESS_MODES = (
    FAIRNESS_MODE_RACE_ONLY,
    FAIRNESS_MODE_COUNTRY_ONLY,
    FAIRNESS_MODE_COMBINED)

# Protected attributes a fairness mode constrains.
FAIRNESS_MODE_ATTRIBUTES = {
    FAIRNESS_MODE_COMBINED: (ATTRIBUTE_RACE, ATTRIBUTE_COUNTRY),
    FAIRNESS_MODE_COUNTRY_ONLY: (ATTRIBUTE_COUNTRY, ),
    FAIRNESS_MODE_RACE_ONLY: (ATTRIBUTE_RACE, )}

MODE_EVAL = 'eval'
MODE_TRAIN = 'train'

SOURCE_FILES = 'files'
SOURCE_SYNTHETIC = 'synthetic'

SOURCES = frozenset([SOURCE_FILES, SOURCE_SYNTHETIC])

AXIS_CONFERENCE = 'conference'
AXIS_TIER = 'tier'

# Selected fraction used for synthetic truth labels and default quotas,
# 280 of 530 synthetic and 351 of 530 real-format papers.
SYNTHETIC_ACCEPT_FRACTION = 280.0 / 530.0
REAL_FORMAT_ACCEPT_FRACTION = 351.0 / 530.0
