# -*- coding: utf-8 -*-
"""Fairness-aware paper selection."""

__version__ = '20250301'
