# -*- coding: utf-8 -*-
"""Differentiable statistical parity penalties.

Group acceptance probabilities are estimated by the mean predicted
probability of the group within the batch.
"""

import numpy

from fairrank import definitions
from fairrank import errors


def _CheckLengths(predictions, mask):
  """Converts and checks predictions and a group mask.

  Args:
    predictions (numpy.ndarray): predicted probabilities.
    mask (numpy.ndarray): boolean group membership.

  Returns:
    tuple[numpy.ndarray, numpy.ndarray]: float64 predictions and boolean mask.

  Raises:
    ShapeError: if the lengths differ.
  """
  predictions = numpy.asarray(predictions, dtype=numpy.float64)
  mask = numpy.asarray(mask, dtype=bool)
  if predictions.ndim != 1 or predictions.shape != mask.shape:
    raise errors.ShapeError(
        f'Predictions shape: {predictions.shape!s} does not match mask '
        f'shape: {mask.shape!s}.')

  return predictions, mask


def GroupRate(predictions, mask):
  """Estimates the acceptance probability of a group.

  Args:
    predictions (numpy.ndarray): predicted probabilities.
    mask (numpy.ndarray): boolean group membership.

  Returns:
    float: mean prediction over the group.

  Raises:
    EmptyGroupError: if the group is empty.
    ShapeError: if the lengths differ.
  """
  predictions, mask = _CheckLengths(predictions, mask)
  if not mask.any():
    raise errors.EmptyGroupError('Group contains no elements.')

  return float(predictions[mask].mean())


def ParityLossSingle(predictions, mask):
  """Computes the squared parity gap between protected and other rows.

  loss = (mean over protected - mean over non-protected)^2

  Args:
    predictions (numpy.ndarray): predicted probabilities.
    mask (numpy.ndarray): boolean protected group membership.

  Returns:
    tuple[float, numpy.ndarray]: loss and gradient with respect to each
        prediction.

  Raises:
    EmptyGroupError: if the protected or non-protected group is empty.
    ShapeError: if the lengths differ.
  """
  predictions, mask = _CheckLengths(predictions, mask)
  number_of_protected = int(mask.sum())
  number_of_others = mask.size - number_of_protected
  if number_of_protected == 0 or number_of_others == 0:
    raise errors.EmptyGroupError(
        f'Parity needs both groups, got protected: {number_of_protected:d} '
        f'non-protected: {number_of_others:d}.')

  gap = predictions[mask].mean() - predictions[~mask].mean()

  gradient = numpy.where(
      mask, 2.0 * gap / number_of_protected, -2.0 * gap / number_of_others)
  return float(gap * gap), gradient


def ParityLossCombined(predictions, masks, w_race, w_country):
  """Computes the weighted two attribute parity loss.

  Each term compares the protected group mean prediction with the mean
  prediction of the whole batch:

  loss = w_race * (mean over race group - mean)^2
       + w_country * (mean over country group - mean)^2

  Args:
    predictions (numpy.ndarray): predicted probabilities.
    masks (GroupMasks): protected group membership.
    w_race (float): race weight.
    w_country (float): country weight.

  Returns:
    tuple[float, numpy.ndarray]: loss and gradient with respect to each
        prediction.

  Raises:
    EmptyGroupError: if a protected group is empty.
    ShapeError: if the lengths differ.
  """
  loss = 0.0
  gradient = None
  for weight, mask in (
      (w_race, masks.protected_race), (w_country, masks.protected_country)):
    predictions, mask = _CheckLengths(predictions, mask)
    number_of_members = int(mask.sum())
    if number_of_members == 0:
      raise errors.EmptyGroupError('Protected group contains no elements.')

    if gradient is None:
      gradient = numpy.zeros_like(predictions)

    gap = predictions[mask].mean() - predictions.mean()
    loss += weight * gap * gap
    gradient += 2.0 * weight * gap * (
        mask / number_of_members - 1.0 / predictions.size)

  return float(loss), gradient


def FairnessLoss(predictions, masks, fairness_spec):
  """Computes the fairness loss of a fairness mode.

  Single attribute modes use the protected versus non-protected gap, the
  combined mode uses the protected versus overall mean gaps.

  Args:
    predictions (numpy.ndarray): predicted probabilities.
    masks (GroupMasks): protected group membership.
    fairness_spec (FairnessSpec): fairness settings.

  Returns:
    tuple[float, numpy.ndarray]: loss and gradient with respect to each
        prediction, not scaled by lambda.

  Raises:
    ConfigurationError: if the fairness mode is not supported.
    EmptyGroupError: if a group required by the mode is empty.
  """
  if fairness_spec.mode == definitions.FAIRNESS_MODE_RACE_ONLY:
    return ParityLossSingle(predictions, masks.protected_race)

  if fairness_spec.mode == definitions.FAIRNESS_MODE_COUNTRY_ONLY:
    return ParityLossSingle(predictions, masks.protected_country)

  if fairness_spec.mode == definitions.FAIRNESS_MODE_COMBINED:
    return ParityLossCombined(
        predictions, masks, fairness_spec.w_race, fairness_spec.w_country)

  raise errors.ConfigurationError(
      f'Unsupported fairness mode: {fairness_spec.mode!s}.')
