# -*- coding: utf-8 -*-
"""Tests for the ranking and top-k selection."""

import unittest

import numpy

from fairrank import errors
from fairrank import selection
from fairrank.model import network
from fairrank.model import rng as rng_module

from tests import test_lib


class SelectTopTest(test_lib.BaseTestCase):
  """Top-k selection tests."""

  def testSelectTop(self):
    """Tests the SelectTop function."""
    paper_ids = ['P00001', 'P00002', 'P00003']

    selection_result = selection.SelectTop([0.9, 0.8, 0.7], paper_ids, 2)
    self.assertEqual(selection_result.selected_ids, ['P00001', 'P00002'])
    self.assertEqual(selection_result.threshold, 0.8)
    self.assertEqual(selection_result.n_accepted, 2)
    self.assertEqual(selection_result.n_total, 3)
    self.assertEqual(selection_result.probabilities['P00003'], 0.7)

    selection_result = selection.SelectTop([0.2, 0.8, 0.5], paper_ids, 3)
    self.assertEqual(
        selection_result.selected_ids, ['P00002', 'P00003', 'P00001'])
    self.assertEqual(selection_result.threshold, 0.2)

  def testSelectTopTies(self):
    """Tests that the SelectTop function breaks ties by identifier."""
    paper_ids = ['P00003', 'P00001', 'P00002']

    selection_result = selection.SelectTop([0.5, 0.5, 0.5], paper_ids, 2)
    self.assertEqual(selection_result.selected_ids, ['P00001', 'P00002'])

    self.assertEqual(
        selection.RankOrder(numpy.array([0.5, 0.6, 0.5]), paper_ids),
        [1, 2, 0])

  def testRankOrderNumericIdentifiers(self):
    """Tests the RankOrder function with numeric identifiers."""
    probabilities = numpy.array([0.5, 0.5, 0.5, 0.9])

    self.assertEqual(
        selection.RankOrder(probabilities, ['10', '9', '2', '100']),
        [3, 2, 1, 0])

    # A single non numeric identifier makes every comparison a string one.
    self.assertEqual(
        selection.RankOrder(probabilities, ['10', '9', '2', 'P1']),
        [3, 0, 2, 1])

    selection_result = selection.SelectTop(
        [0.5, 0.5, 0.5], ['10', '9', '2'], 2)
    self.assertEqual(selection_result.selected_ids, ['2', '9'])

  def testSelectTopRandomized(self):
    """Tests the SelectTop function on randomized instances."""
    generator = rng_module.Rng(11)

    for _ in range(1000):
      number_of_rows = int(generator.Integers(1, 31))
      n_accept = int(generator.Integers(1, number_of_rows + 1))
      probabilities = numpy.round(generator.Random(size=number_of_rows), 1)
      paper_ids = [
          f'P{int(value):05d}' for value in generator.Permutation(
              number_of_rows)]

      selection_result = selection.SelectTop(
          probabilities, paper_ids, n_accept)
      selected_ids = selection_result.selected_ids
      self.assertEqual(len(selected_ids), n_accept)
      self.assertEqual(len(set(selected_ids)), n_accept)

      selected_rows = set(
          paper_ids.index(paper_id) for paper_id in selected_ids)
      other_rows = set(range(number_of_rows)) - selected_rows
      if other_rows:
        self.assertGreaterEqual(
            min(probabilities[row] for row in selected_rows),
            max(probabilities[row] for row in other_rows))

      # The selection only depends on the order of the probabilities.
      transformed_result = selection.SelectTop(
          0.5 * probabilities ** 3 + 0.1, paper_ids, n_accept)
      self.assertEqual(transformed_result.selected_ids, selected_ids)

  def testSelectTopWithErrors(self):
    """Tests the SelectTop function with invalid arguments."""
    paper_ids = ['P00001', 'P00002', 'P00003']

    for n_accept in (0, 4, -1, 2.5, True, None):
      with self.assertRaises(errors.ConfigurationError):
        selection.SelectTop([0.9, 0.8, 0.7], paper_ids, n_accept)

    with self.assertRaises(errors.ShapeError):
      selection.SelectTop([0.9, 0.8], paper_ids, 1)


class RankAndSelectTest(test_lib.BaseTestCase):
  """Rank and select tests."""

  def _CreateDataset(self):
    """Creates a dataset of four rows.

    Returns:
      EncodedDataset: encoded dataset.
    """
    return self._CreateEncodedDataset(
        [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5], [0.2, 0.8]], [1, 0, 1, 0],
        [True, False, False, False], [True, True, True, True])

  def testVerifyParity(self):
    """Tests the VerifyParity function."""
    dataset = self._CreateDataset()
    selection_result = selection.SelectTop(
        [0.9, 0.1, 0.8, 0.2], dataset.paper_ids, 2)

    parity = selection.VerifyParity(selection_result, dataset)
    self.assertEqual(parity['race']['selected_share'], 0.5)
    self.assertAlmostEqual(
        parity['race']['selection_rate_difference'], 1.0 - 1.0 / 3.0)
    self.assertEqual(parity['country']['selected_share'], 1.0)
    self.assertIsNone(parity['country']['selection_rate_difference'])

  def testRankAndSelect(self):
    """Tests the RankAndSelect function."""
    dataset = self._CreateDataset()
    params = network.ModelParams([2, 4, 2, 1])

    selection_result = selection.RankAndSelect(params, dataset, 3)
    self.assertEqual(
        selection_result.selected_ids, ['P00001', 'P00002', 'P00003'])
    self.assertEqual(selection_result.threshold, 0.5)
    self.assertEqual(selection_result.n_total, 4)
    self.assertEqual(selection_result.parity['race']['selected_share'],
                     1.0 / 3.0)

    with self.assertRaises(errors.ConfigurationError):
      selection.RankAndSelect(params, dataset, 5)


if __name__ == '__main__':
  unittest.main()
