# -*- coding: utf-8 -*-
"""Ranking and top-k selection of papers."""

import numpy

from fairrank import data_types
from fairrank import definitions
from fairrank import errors
from fairrank import training


def _GetIdentifierSortKeys(paper_ids):
  """Retrieves the tie-breaking sort keys of paper identifiers.

  Args:
    paper_ids (list[str]): paper identifiers.

  Returns:
    list[object]: integer per identifier if every identifier is a decimal
        number, the identifier string otherwise.
  """
  identifiers = [str(paper_id) for paper_id in paper_ids]
  if identifiers and all(
      identifier.isdecimal() for identifier in identifiers):
    return [int(identifier, 10) for identifier in identifiers]

  return identifiers


def RankOrder(probabilities, paper_ids):
  """Ranks rows by descending probability.

  Ties are broken by ascending paper identifier. Identifiers are compared as
  numbers when all of them are decimal numbers, such that "9" ranks before
  "10", and as strings otherwise.

  Args:
    probabilities (numpy.ndarray): probability per row.
    paper_ids (list[str]): paper identifier per row.

  Returns:
    list[int]: row indices, highest probability first.
  """
  sort_keys = _GetIdentifierSortKeys(paper_ids)
  return sorted(
      range(len(paper_ids)),
      key=lambda row: (-probabilities[row], sort_keys[row]))


def SelectTop(probabilities, paper_ids, n_accept):
  """Selects the rows with the highest probabilities.

  Args:
    probabilities (numpy.ndarray): probability per row.
    paper_ids (list[str]): paper identifier per row.
    n_accept (int): number of rows to select.

  Returns:
    SelectionResult: selection without parity statistics.

  Raises:
    ConfigurationError: if n_accept is not in [1, number of rows].
  """
  number_of_rows = len(paper_ids)
  if (not isinstance(n_accept, (int, numpy.integer)) or
      isinstance(n_accept, bool) or not 1 <= n_accept <= number_of_rows):
    raise errors.ConfigurationError(
        f'n_accept must be in [1, {number_of_rows:d}], got: {n_accept!s}.')

  probabilities = numpy.asarray(probabilities, dtype=numpy.float64)
  if probabilities.shape != (number_of_rows, ):
    raise errors.ShapeError(
        'Number of probabilities does not match number of papers.')

  order = RankOrder(probabilities, paper_ids)[:n_accept]
  selected_ids = [paper_ids[row] for row in order]

  return data_types.SelectionResult(
      selected_ids, float(probabilities[order[-1]]), int(n_accept),
      number_of_rows,
      {paper_id: float(probability)
       for paper_id, probability in zip(paper_ids, probabilities)})


def VerifyParity(selection_result, dataset):
  """Computes parity statistics of a selection.

  Args:
    selection_result (SelectionResult): selection.
    dataset (EncodedDataset): encoded dataset the selection was made from.

  Returns:
    dict[str, dict[str, float]]: per attribute the selected protected share
        and the selection rate difference between the protected and the
        non-protected group, None where a group is empty.
  """
  selected_ids = set(selection_result.selected_ids)
  selected = numpy.array(
      [paper_id in selected_ids for paper_id in dataset.paper_ids], dtype=bool)

  parity = {}
  for attribute in definitions.PROTECTED_ATTRIBUTES:
    mask = dataset.masks.GetMask(attribute)

    rate_difference = None
    if mask.any() and (~mask).any():
      rate_difference = float(selected[mask].mean() - selected[~mask].mean())

    parity[attribute] = {
        'selected_share': float(mask[selected].mean()),
        'selection_rate_difference': rate_difference}

  return parity


def RankAndSelect(params, dataset, n_accept):
  """Ranks all papers by predicted acceptance and selects the top n_accept.

  The model is applied in eval mode to every row, training and validation
  alike. The parity of the selection is verified, not enforced.

  Args:
    params (ModelParams): trained parameters.
    dataset (EncodedDataset): encoded dataset.
    n_accept (int): number of papers to select.

  Returns:
    SelectionResult: selection.

  Raises:
    ConfigurationError: if n_accept is not in [1, number of rows].
  """
  number_of_rows = dataset.number_of_rows
  if (not isinstance(n_accept, (int, numpy.integer)) or
      isinstance(n_accept, bool) or not 1 <= n_accept <= number_of_rows):
    raise errors.ConfigurationError(
        f'n_accept must be in [1, {number_of_rows:d}], got: {n_accept!s}.')

  probabilities = training.Predict(params, dataset)
  selection_result = SelectTop(probabilities, dataset.paper_ids, n_accept)
  selection_result.parity = VerifyParity(selection_result, dataset)
  return selection_result
