# -*- coding: utf-8 -*-
"""Prediction losses."""

import numpy

from fairrank import errors


BCE_EPSILON = 1e-12


def BCELoss(predictions, labels):
  """Computes the mean binary cross-entropy and its gradient.

  Predictions are clamped to [BCE_EPSILON, 1 - BCE_EPSILON].

  Args:
    predictions (numpy.ndarray): predicted probabilities.
    labels (numpy.ndarray): labels in {0, 1}.

  Returns:
    tuple[float, numpy.ndarray]: mean loss and gradient of the mean loss with
        respect to each prediction.

  Raises:
    ShapeError: if predictions and labels differ in length or are empty.
  """
  predictions = numpy.asarray(predictions, dtype=numpy.float64)
  labels = numpy.asarray(labels, dtype=numpy.float64)
  if predictions.ndim != 1 or predictions.shape != labels.shape:
    raise errors.ShapeError(
        f'Predictions shape: {predictions.shape!s} does not match labels '
        f'shape: {labels.shape!s}.')

  if predictions.size == 0:
    raise errors.ShapeError('Predictions are empty.')

  clamped = numpy.clip(predictions, BCE_EPSILON, 1.0 - BCE_EPSILON)
  number_of_values = float(predictions.size)

  losses = -(labels * numpy.log(clamped) +
             (1.0 - labels) * numpy.log1p(-clamped))
  gradient = (-labels / clamped + (1.0 - labels) / (1.0 - clamped)) / (
      number_of_values)

  return float(losses.mean()), gradient
