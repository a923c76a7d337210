# -*- coding: utf-8 -*-
"""Tests for the prediction losses."""

import math
import unittest

import numpy

from fairrank import errors
from fairrank.model import losses
from fairrank.model import rng as rng_module

from tests import test_lib


class BCELossTest(test_lib.BaseTestCase):
  """Binary cross-entropy loss tests."""

  def testSymmetricCase(self):
    """Tests the loss of uninformed predictions."""
    loss, gradient = losses.BCELoss([0.5, 0.5], [1, 0])
    self.assertAlmostEqual(loss, math.log(2.0), places=12)
    self.assertAlmostEqual(gradient[0], -1.0, places=12)
    self.assertAlmostEqual(gradient[1], 1.0, places=12)

  def testPerfectFit(self):
    """Tests the loss of predictions equal to the labels."""
    loss, _ = losses.BCELoss([1.0, 0.0, 1.0], [1, 0, 1])
    self.assertLessEqual(loss, 1e-10)

  def testGradient(self):
    """Tests the gradient against central finite differences."""
    generator = rng_module.Rng(5)
    predictions = generator.Uniform(0.05, 0.95, size=8)
    labels = (generator.Random(size=8) < 0.5).astype(numpy.float64)

    _, gradient = losses.BCELoss(predictions, labels)
    numerical_gradient = test_lib.CentralDifference(
        lambda: losses.BCELoss(predictions, labels)[0], predictions)

    relative_error = numpy.abs(gradient - numerical_gradient) / numpy.maximum(
        numpy.abs(numerical_gradient), 1e-7)
    self.assertLess(float(relative_error.max()), 1e-6)

  def testErrors(self):
    """Tests the errors."""
    with self.assertRaises(errors.ShapeError):
      losses.BCELoss([0.5, 0.5], [1])

    with self.assertRaises(errors.ShapeError):
      losses.BCELoss([], [])


if __name__ == '__main__':
  unittest.main()
