# -*- coding: utf-8 -*-
"""Shared test case."""

import os
import unittest

import numpy

from fairrank import data_types
from fairrank import definitions


class BaseTestCase(unittest.TestCase):
  """The base test case."""

  _TEST_DATA_PATH = os.path.join(os.getcwd(), 'test_data')

  # Show full diff results, part of TestCase so does not follow our naming
  # conventions.
  maxDiff = None

  def _CreateAuthor(
      self, author_id, race=definitions.RACE_WHITE,
      country_class=definitions.COUNTRY_CLASS_DEVELOPED,
      gender=definitions.GENDER_MALE,
      career_stage=definitions.CAREER_STAGE_PROFESSOR, h_index=10.0):
    """Creates an author record.

    Args:
      author_id (str): identifier.
      race (Optional[str]): race.
      country_class (Optional[str]): country class.
      gender (Optional[int]): gender.
      career_stage (Optional[str]): career stage.
      h_index (Optional[float]): h-index.

    Returns:
      AuthorRecord: author record.
    """
    return data_types.AuthorRecord(
        author_id, gender, race, country_class, career_stage, h_index)

  def _CreatePaper(
      self, paper_id, author_ids, conference=definitions.CONFERENCE_SIGCHI,
      accepted=0, tier=None):
    """Creates a paper record.

    Args:
      paper_id (str): identifier.
      author_ids (list[str]): author identifiers.
      conference (Optional[int]): conference label.
      accepted (Optional[int]): acceptance label.
      tier (Optional[str]): tier.

    Returns:
      PaperRecord: paper record.
    """
    return data_types.PaperRecord(
        paper_id, f'Title of {paper_id:s}', author_ids, conference, accepted,
        tier=tier)

  def _CreateEncodedDataset(self, features, labels, race_flags, country_flags):
    """Creates an encoded dataset without split.

    Args:
      features (list[list[float]]): feature rows.
      labels (list[int]): label per row.
      race_flags (list[bool]): protected race flag per row.
      country_flags (list[bool]): protected country flag per row.

    Returns:
      EncodedDataset: encoded dataset.
    """
    features = numpy.array(features, dtype=numpy.float64)
    feature_schema = [
        data_types.FeatureColumn(f'column{index:d}', 'share')
        for index in range(features.shape[1])]
    paper_ids = [f'P{index + 1:05d}' for index in range(features.shape[0])]
    return data_types.EncodedDataset(
        features, numpy.array(labels, dtype=numpy.float64),
        data_types.GroupMasks(race_flags, country_flags), paper_ids,
        feature_schema)

  def _GetTestFilePath(self, path_segments):
    """Retrieves the path of a test file in the test data directory.

    Args:
      path_segments (list[str]): path segments inside the test data directory.

    Returns:
      str: path of the test file.
    """
    # Note that we need to pass the individual path segments to os.path.join
    # and not a list.
    return os.path.join(self._TEST_DATA_PATH, *path_segments)

  def _SkipIfPathNotExists(self, path):
    """Skips the test if the path does not exist.

    Args:
      path (str): path of a test file.

    Raises:
      SkipTest: if the path does not exist and the test should be skipped.
    """
    if not os.path.exists(path):
      filename = os.path.basename(path)
      raise unittest.SkipTest(f'missing test file: {filename:s}')


def CentralDifference(function, values, step=1e-5):
  """Computes the central finite difference gradient of a function.

  Args:
    function (function): function of the values that returns a float.
    values (numpy.ndarray): values, modified in place and restored.
    step (Optional[float]): step size.

  Returns:
    numpy.ndarray: numerical gradient shaped like the values.
  """
  gradient = numpy.zeros_like(values)
  for index in numpy.ndindex(values.shape):
    original = values[index]
    values[index] = original + step
    upper = function()
    values[index] = original - step
    lower = function()
    values[index] = original
    gradient[index] = (upper - lower) / (2.0 * step)
  return gradient
