# -*- coding: utf-8 -*-
"""Feature encoding and stratified splitting."""

import collections
import logging

import numpy

from fairrank import corpus
from fairrank import data_types
from fairrank import definitions
from fairrank import errors


COLUMN_KIND_MIN_MAX = 'min-max'
COLUMN_KIND_ONE_HOT = 'one-hot'
COLUMN_KIND_SHARE = 'share'


def DominantCareerStage(paper, authors_by_identifier):
  """Determines the most frequent career stage of the authors of a paper.

  Ties are resolved in career stage order.

  Args:
    paper (PaperRecord): paper record.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.

  Returns:
    str: career stage.
  """
  counts = collections.Counter(
      authors_by_identifier[author_id].career_stage
      for author_id in paper.author_ids)

  return max(
      definitions.CAREER_STAGES,
      key=lambda stage: (
          counts[stage], -definitions.CAREER_STAGES.index(stage)))


def WeightedHIndex(paper, authors_by_identifier, stage_weights):
  """Computes the career stage weighted h-index of a paper.

  Args:
    paper (PaperRecord): paper record.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    stage_weights (dict[str, float]): weight per career stage.

  Returns:
    float: mean over the authors of the stage weight times the h-index.
  """
  values = [
      stage_weights[author.career_stage] * author.h_index
      for author in (
          authors_by_identifier[author_id] for author_id in paper.author_ids)]
  return float(numpy.mean(values))


def _MinMaxScale(name, values, warnings):
  """Min-max scales a numeric column.

  Args:
    name (str): name of the column.
    values (numpy.ndarray): unscaled values.
    warnings (list[str]): warnings, extended if the column is constant.

  Returns:
    tuple[numpy.ndarray, FeatureColumn]: scaled values and column descriptor.
  """
  minimum = float(values.min())
  maximum = float(values.max())
  column = data_types.FeatureColumn(
      name, COLUMN_KIND_MIN_MAX, minimum=minimum, maximum=maximum)

  if maximum == minimum:
    warning = f'Constant numeric column: {name:s} scaled to 0.'
    logging.warning(warning)
    warnings.append(warning)
    return numpy.zeros_like(values), column

  return (values - minimum) / (maximum - minimum), column


def Encode(papers, authors, stage_weights):
  """Encodes paper records as a feature matrix.

  The columns are the one-hot conference, the one-hot dominant career stage,
  the min-max scaled author count, the female author share and the min-max
  scaled weighted h-index. Race and country never enter the features, they
  are only kept in the group masks. The scaling parameters are fit on all
  papers.

  Args:
    papers (list[PaperRecord]): paper records.
    authors (list[AuthorRecord]): author records.
    stage_weights (dict[str, float]): weight per career stage.

  Returns:
    EncodedDataset: encoded dataset without split.

  Raises:
    ShapeError: if there are no papers.
  """
  if not papers:
    raise errors.ShapeError('Unable to encode an empty set of papers.')

  authors_by_identifier = corpus.GetAuthorsByIdentifier(authors)
  number_of_papers = len(papers)
  warnings = []

  conferences = sorted(definitions.CONFERENCES)
  conference_columns = numpy.zeros(
      (number_of_papers, len(conferences)), dtype=numpy.float64)
  stage_columns = numpy.zeros(
      (number_of_papers, len(definitions.CAREER_STAGES)), dtype=numpy.float64)
  author_counts = numpy.zeros(number_of_papers, dtype=numpy.float64)
  female_shares = numpy.zeros(number_of_papers, dtype=numpy.float64)
  weighted_h_indexes = numpy.zeros(number_of_papers, dtype=numpy.float64)

  for row, paper in enumerate(papers):
    conference_columns[row, conferences.index(paper.conference)] = 1.0

    stage = DominantCareerStage(paper, authors_by_identifier)
    stage_columns[row, definitions.CAREER_STAGES.index(stage)] = 1.0

    author_counts[row] = len(paper.author_ids)
    female_shares[row] = numpy.mean([
        authors_by_identifier[author_id].gender == definitions.GENDER_FEMALE
        for author_id in paper.author_ids])
    weighted_h_indexes[row] = WeightedHIndex(
        paper, authors_by_identifier, stage_weights)

  feature_schema = [
      data_types.FeatureColumn(
          f'conference_{definitions.CONFERENCE_NAMES[conference]:s}',
          COLUMN_KIND_ONE_HOT)
      for conference in conferences]
  feature_schema.extend([
      data_types.FeatureColumn(f'stage_{stage:s}', COLUMN_KIND_ONE_HOT)
      for stage in definitions.CAREER_STAGES])

  scaled_author_counts, column = _MinMaxScale(
      'author_count', author_counts, warnings)
  feature_schema.append(column)

  feature_schema.append(data_types.FeatureColumn(
      'female_author_share', COLUMN_KIND_SHARE, minimum=0.0, maximum=1.0))

  scaled_h_indexes, column = _MinMaxScale(
      'weighted_h_index', weighted_h_indexes, warnings)
  feature_schema.append(column)

  features = numpy.column_stack([
      conference_columns, stage_columns, scaled_author_counts, female_shares,
      scaled_h_indexes])

  masks = data_types.GroupMasks(
      corpus.ProtectedFlags(
          papers, authors_by_identifier, definitions.ATTRIBUTE_RACE),
      corpus.ProtectedFlags(
          papers, authors_by_identifier, definitions.ATTRIBUTE_COUNTRY))

  labels = numpy.array(
      [paper.accepted for paper in papers], dtype=numpy.float64)

  dataset = data_types.EncodedDataset(
      features, labels, masks, [paper.paper_id for paper in papers],
      feature_schema)
  dataset.warnings.extend(warnings)
  return dataset


def _GetStrata(dataset):
  """Groups rows by label and protected flags.

  Args:
    dataset (EncodedDataset): encoded dataset.

  Returns:
    collections.OrderedDict[tuple[int, bool, bool], list[int]]: row indices
        per stratum key in ascending key order.
  """
  strata = collections.defaultdict(list)
  for row in range(dataset.number_of_rows):
    key = (
        int(dataset.labels[row]), bool(dataset.masks.protected_race[row]),
        bool(dataset.masks.protected_country[row]))
    strata[key].append(row)

  return collections.OrderedDict(sorted(strata.items()))


def StratifiedSplit(dataset, train_fraction, rng):
  """Splits a dataset into training and validation rows.

  The rows are stratified jointly on the label and both protected flags. The
  number of training rows per stratum is allocated by largest remainder, so
  that every stratum is within one row of the training fraction and the
  total equals the rounded training fraction of all rows. A stratum of one
  row is placed in the training split.

  Args:
    dataset (EncodedDataset): encoded dataset.
    train_fraction (float): fraction of rows used for training.
    rng (Rng): random number generator.

  Returns:
    EncodedDataset: copy of the dataset with the split indices set.

  Raises:
    ConfigurationError: if the training fraction is not in (0, 1).
  """
  if not 0.0 < train_fraction < 1.0:
    raise errors.ConfigurationError(
        f'train_fraction must be in (0, 1), got: {train_fraction!s}.')

  strata = _GetStrata(dataset)
  warnings = []

  allocations = collections.OrderedDict()
  remainders = []
  for key, rows in strata.items():
    quota = train_fraction * len(rows)
    if len(rows) == 1:
      warning = (
          f'Stratum: {key!s} contains a single row, placed in the training '
          f'split.')
      logging.warning(warning)
      warnings.append(warning)
      allocations[key] = 1
    else:
      allocations[key] = int(numpy.floor(quota))
      remainders.append((quota - allocations[key], key))

  target = int(round(train_fraction * dataset.number_of_rows))
  shortfall = target - sum(allocations.values())

  # Largest remainders first, ties in stratum key order.
  remainders.sort(key=lambda item: (-item[0], item[1]))
  for _, key in remainders[:max(shortfall, 0)]:
    allocations[key] += 1

  # Singletons can push the total above the target.
  for _, key in reversed(remainders):
    if shortfall >= 0:
      break
    if allocations[key] > 0:
      allocations[key] -= 1
      shortfall += 1

  train_rows = []
  valid_rows = []
  for key, rows in strata.items():
    permuted_rows = rng.Permutation(numpy.array(rows, dtype=numpy.int64))
    train_rows.extend(permuted_rows[:allocations[key]].tolist())
    valid_rows.extend(permuted_rows[allocations[key]:].tolist())

  split_dataset = dataset.CopyWithSplit(
      numpy.array(sorted(train_rows), dtype=numpy.int64),
      numpy.array(sorted(valid_rows), dtype=numpy.int64))
  split_dataset.warnings.extend(warnings)
  return split_dataset
