# -*- coding: utf-8 -*-
"""Fairness and utility metrics of a selection against a baseline.

Gains are relative percentage increases over the baseline:

gain = 100 * (value of selection - value of baseline) / value of baseline
"""

import math

import numpy

from fairrank import corpus
from fairrank import data_types
from fairrank import definitions
from fairrank import encoding
from fairrank import errors


MAXIMUM_FEATURE_GAIN = 100.0


def _CheckNotEmpty(papers, name):
  """Checks that a set of papers is not empty.

  Args:
    papers (list[PaperRecord]): papers.
    name (str): name of the set.

  Raises:
    ShapeError: if the set is empty.
  """
  if not papers:
    raise errors.ShapeError(f'{name:s} set of papers is empty.')


def RelativeGain(selected_value, baseline_value, name):
  """Computes the relative gain of a value over a baseline value.

  Args:
    selected_value (float): value of the selection.
    baseline_value (float): value of the baseline.
    name (str): name of the gain.

  Returns:
    float: gain in percent.

  Raises:
    UndefinedGainError: if the baseline value is 0.
  """
  if baseline_value == 0.0:
    raise errors.UndefinedGainError(f'{name:s} undefined for zero baseline.')

  return 100.0 * (selected_value - baseline_value) / baseline_value


def ProtectedPaperShare(papers, authors_by_identifier, attribute):
  """Computes the fraction of protected papers.

  Args:
    papers (list[PaperRecord]): papers.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    attribute (str): race or country.

  Returns:
    float: fraction of papers that are protected on the attribute.
  """
  flags = corpus.ProtectedFlags(papers, authors_by_identifier, attribute)
  return sum(flags) / len(flags)


def ProtectedAuthorShare(papers, authors_by_identifier, attribute):
  """Computes the fraction of protected author slots.

  An author is counted once per paper it appears on.

  Args:
    papers (list[PaperRecord]): papers.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    attribute (str): race or country.

  Returns:
    float: fraction of author slots that are protected on the attribute.
  """
  flags = [
      authors_by_identifier[author_id].IsProtected(attribute)
      for paper in papers for author_id in paper.author_ids]
  return sum(flags) / len(flags)


def MacroGain(selected, baseline, attribute, authors_by_identifier):
  """Computes the macro gain of the protected paper share.

  Args:
    selected (list[PaperRecord]): selected papers.
    baseline (list[PaperRecord]): baseline papers.
    attribute (str): race or country.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.

  Returns:
    float: gain in percent.

  Raises:
    ShapeError: if a set is empty.
    UndefinedGainError: if the baseline contains no protected paper.
  """
  _CheckNotEmpty(selected, 'Selected')
  _CheckNotEmpty(baseline, 'Baseline')

  return RelativeGain(
      ProtectedPaperShare(selected, authors_by_identifier, attribute),
      ProtectedPaperShare(baseline, authors_by_identifier, attribute),
      f'Macro gain of: {attribute:s}')


def MicroGain(selected, baseline, attribute, authors_by_identifier):
  """Computes the micro gain of the protected author share.

  Args:
    selected (list[PaperRecord]): selected papers.
    baseline (list[PaperRecord]): baseline papers.
    attribute (str): race or country.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.

  Returns:
    float: gain in percent.

  Raises:
    ShapeError: if a set is empty.
    UndefinedGainError: if the baseline contains no protected author.
  """
  _CheckNotEmpty(selected, 'Selected')
  _CheckNotEmpty(baseline, 'Baseline')

  return RelativeGain(
      ProtectedAuthorShare(selected, authors_by_identifier, attribute),
      ProtectedAuthorShare(baseline, authors_by_identifier, attribute),
      f'Micro gain of: {attribute:s}')


def SetUtility(papers, authors_by_identifier, stage_weights):
  """Computes the utility of a set of papers.

  Args:
    papers (list[PaperRecord]): papers.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    stage_weights (dict[str, float]): weight per career stage.

  Returns:
    float: mean weighted h-index of the papers.
  """
  return float(numpy.mean([
      encoding.WeightedHIndex(paper, authors_by_identifier, stage_weights)
      for paper in papers]))


def UtilityGain(selected, baseline, authors_by_identifier, stage_weights):
  """Computes the utility gain.

  Args:
    selected (list[PaperRecord]): selected papers.
    baseline (list[PaperRecord]): baseline papers.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    stage_weights (dict[str, float]): weight per career stage.

  Returns:
    float: gain in percent.

  Raises:
    ShapeError: if a set is empty.
    UndefinedGainError: if the baseline utility is 0.
  """
  _CheckNotEmpty(selected, 'Selected')
  _CheckNotEmpty(baseline, 'Baseline')

  return RelativeGain(
      SetUtility(selected, authors_by_identifier, stage_weights),
      SetUtility(baseline, authors_by_identifier, stage_weights),
      'Utility gain')


def DiversityGain(macro_gains):
  """Computes the diversity gain.

  Every macro gain is capped above at 100, negative gains are not capped.

  Args:
    macro_gains (list[float]): macro gain per attribute in percent.

  Returns:
    float: mean capped macro gain in percent.

  Raises:
    ShapeError: if there are no macro gains.
  """
  if not macro_gains:
    raise errors.ShapeError('Diversity gain needs at least one macro gain.')

  return sum(min(MAXIMUM_FEATURE_GAIN, gain) for gain in macro_gains) / len(
      macro_gains)


def FMeasure(diversity_gain, utility_gain):
  """Computes the F-measure of diversity and utility.

  F = 2 * DG * (100 - UG) / (DG + (100 - UG))

  Args:
    diversity_gain (float): diversity gain in percent.
    utility_gain (float): utility gain in percent.

  Returns:
    float: F-measure in percent.

  Raises:
    UndefinedGainError: if the denominator is 0.
  """
  utility_term = 100.0 - utility_gain
  denominator = diversity_gain + utility_term
  if denominator == 0.0:
    raise errors.UndefinedGainError('F-measure undefined for zero denominator.')

  return 2.0 * diversity_gain * utility_term / denominator


def DistributionReport(selected, axis):
  """Computes the share of selected papers per conference or tier.

  Args:
    selected (list[PaperRecord]): selected papers.
    axis (str): conference or tier.

  Returns:
    dict[str, float]: share in percent per conference name or tier.

  Raises:
    ConfigurationError: if the axis is not supported or a paper has no tier.
    ShapeError: if the set is empty.
  """
  _CheckNotEmpty(selected, 'Selected')

  if axis == definitions.AXIS_CONFERENCE:
    categories = [
        definitions.CONFERENCE_NAMES[conference]
        for conference in sorted(definitions.CONFERENCES, reverse=True)]
    values = [definitions.CONFERENCE_NAMES[paper.conference]
              for paper in selected]

  elif axis == definitions.AXIS_TIER:
    categories = list(definitions.TIERS)
    values = [paper.tier for paper in selected]
    if None in values:
      raise errors.ConfigurationError('Tier distribution needs tiered papers.')

  else:
    raise errors.ConfigurationError(f'Unsupported axis: {axis!s}.')

  return {
      category: 100.0 * values.count(category) / len(values)
      for category in categories}


def _Guard(report, name, function, *args):
  """Evaluates a gain and records it as undefined on failure.

  Args:
    report (MetricsReport): report to record undefined gains in.
    name (str): name of the gain.
    function (function): gain function.
    args (list[object]): arguments of the gain function.

  Returns:
    float: gain or NaN if undefined.
  """
  if any(isinstance(value, float) and math.isnan(value) for value in args):
    report.undefined[name] = 'depends on an undefined gain'
    return math.nan

  try:
    return function(*args)
  except errors.UndefinedGainError as exception:
    report.undefined[name] = str(exception)
    return math.nan


def BuildMetricsReport(
    selected, baseline, authors, stage_weights, attributes, axis):
  """Builds the metrics report of a selection against a baseline.

  Args:
    selected (list[PaperRecord]): selected papers.
    baseline (list[PaperRecord]): baseline papers.
    authors (list[AuthorRecord]): author records.
    stage_weights (dict[str, float]): weight per career stage.
    attributes (tuple[str]): attributes averaged by the diversity gain.
    axis (str): conference or tier distribution axis.

  Returns:
    MetricsReport: metrics report.
  """
  authors_by_identifier = corpus.GetAuthorsByIdentifier(authors)
  report = data_types.MetricsReport()

  for attribute in definitions.PROTECTED_ATTRIBUTES:
    report.macro_gain[attribute] = _Guard(
        report, f'macro_gain.{attribute:s}', MacroGain, selected, baseline,
        attribute, authors_by_identifier)
    report.micro_gain[attribute] = _Guard(
        report, f'micro_gain.{attribute:s}', MicroGain, selected, baseline,
        attribute, authors_by_identifier)

  report.utility_gain = _Guard(
      report, 'utility_gain', UtilityGain, selected, baseline,
      authors_by_identifier, stage_weights)

  report.n_features = len(attributes)
  macro_gains = [report.macro_gain[attribute] for attribute in attributes]
  if any(math.isnan(gain) for gain in macro_gains):
    report.undefined['diversity_gain'] = 'depends on an undefined gain'
    report.diversity_gain = math.nan
  else:
    report.diversity_gain = DiversityGain(macro_gains)

  report.f_measure = _Guard(
      report, 'f_measure', FMeasure, report.diversity_gain,
      report.utility_gain)

  report.distribution_axis = axis
  report.distribution = DistributionReport(selected, axis)
  return report
