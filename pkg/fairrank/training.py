# -*- coding: utf-8 -*-
"""Mini-batch training with a fairness regularized loss."""

import logging

import numpy

from fairrank import data_types
from fairrank import definitions
from fairrank import errors
from fairrank import fairness
from fairrank.model import losses
from fairrank.model import network
from fairrank.model import optimizers
from fairrank.model import rng as rng_module


# Random number streams of a training run.
INITIALIZATION_STREAM = 1
SHUFFLE_STREAM = 2


def IsFairnessActive(fairness_spec):
  """Determines if a fairness term contributes to the loss.

  Args:
    fairness_spec (FairnessSpec): fairness settings or None.

  Returns:
    bool: True if lambda is positive.
  """
  return fairness_spec is not None and fairness_spec.lambda_value > 0.0


def BatchLoss(params, features, labels, masks, fairness_spec, mode):
  """Computes the total loss of a batch.

  total loss = prediction loss + lambda * fairness loss

  Args:
    params (ModelParams): parameters.
    features (numpy.ndarray): input rows.
    labels (numpy.ndarray): labels per row.
    masks (GroupMasks): protected group membership per row.
    fairness_spec (FairnessSpec): fairness settings or None.
    mode (str): MODE_TRAIN or MODE_EVAL.

  Returns:
    tuple[dict[str, object], ActivationCache]: loss values and the activation
        cache. The loss values contain prediction_loss, fairness_loss,
        total_loss, prediction_gradients and empty_group, which is True if
        the fairness term was skipped because a group was empty.
  """
  predictions, cache = network.Forward(params, features, mode)
  prediction_loss, prediction_gradients = losses.BCELoss(predictions, labels)

  fairness_loss = 0.0
  empty_group = False
  if IsFairnessActive(fairness_spec):
    try:
      fairness_loss, fairness_gradients = fairness.FairnessLoss(
          predictions, masks, fairness_spec)
      prediction_gradients = (
          prediction_gradients +
          fairness_spec.lambda_value * fairness_gradients)
    except errors.EmptyGroupError:
      empty_group = True

  if fairness_spec is not None:
    total_loss = prediction_loss + fairness_spec.lambda_value * fairness_loss
  else:
    total_loss = prediction_loss

  values = {
      'empty_group': empty_group,
      'fairness_loss': fairness_loss,
      'prediction_gradients': prediction_gradients,
      'prediction_loss': prediction_loss,
      'total_loss': total_loss}
  return values, cache


def Predict(params, dataset, indices=None):
  """Predicts acceptance probabilities in eval mode.

  Args:
    params (ModelParams): parameters.
    dataset (EncodedDataset): encoded dataset.
    indices (Optional[numpy.ndarray]): row indices, None for all rows.

  Returns:
    numpy.ndarray: predicted probability per row.
  """
  features = dataset.features
  if indices is not None:
    features = features[indices]

  predictions, _ = network.Forward(params, features, definitions.MODE_EVAL)
  return predictions


def EvaluateTotalLoss(params, dataset, indices, fairness_spec):
  """Computes the eval mode total loss of rows.

  Args:
    params (ModelParams): parameters.
    dataset (EncodedDataset): encoded dataset.
    indices (numpy.ndarray): row indices.
    fairness_spec (FairnessSpec): fairness settings or None.

  Returns:
    float: total loss.
  """
  values, _ = BatchLoss(
      params, dataset.features[indices], dataset.labels[indices],
      dataset.masks.Subset(indices), fairness_spec, definitions.MODE_EVAL)
  return values['total_loss']


def ParityGap(params, dataset, indices, attribute):
  """Computes the absolute parity gap of eval mode predictions.

  Args:
    params (ModelParams): parameters.
    dataset (EncodedDataset): encoded dataset.
    indices (numpy.ndarray): row indices.
    attribute (str): race or country.

  Returns:
    float: absolute difference between the mean prediction of protected and
        non-protected rows.

  Raises:
    EmptyGroupError: if either group is empty.
  """
  predictions = Predict(params, dataset, indices)
  mask = dataset.masks.GetMask(attribute)[indices]
  return abs(
      fairness.GroupRate(predictions, mask) -
      fairness.GroupRate(predictions, ~mask))


def StratifiedBatches(indices, masks, batch_size, rng):
  """Shuffles rows into batches stratified by the protected flags.

  The rows of every (protected race, protected country) group are shuffled
  and spread evenly over the epoch, so that every batch contains every group
  that is large enough. A trailing batch of a single row is merged into the
  previous batch.

  Args:
    indices (numpy.ndarray): row indices.
    masks (GroupMasks): protected group membership of all rows.
    batch_size (int): batch size.
    rng (Rng): random number generator.

  Returns:
    list[numpy.ndarray]: row indices per batch.
  """
  keys = []
  group_numbers = []
  ordered_rows = []
  for group_number, (race_flag, country_flag) in enumerate((
      (False, False), (False, True), (True, False), (True, True))):
    rows = indices[
        (masks.protected_race[indices] == race_flag) &
        (masks.protected_country[indices] == country_flag)]
    if not rows.size:
      continue

    rows = rng.Permutation(rows)
    offset = rng.Random()
    keys.extend(((numpy.arange(rows.size) + offset) / rows.size).tolist())
    group_numbers.extend([group_number] * rows.size)
    ordered_rows.extend(rows.tolist())

  order = numpy.lexsort((group_numbers, keys))
  shuffled_rows = numpy.array(ordered_rows, dtype=numpy.int64)[order]

  batches = [
      shuffled_rows[start:start + batch_size]
      for start in range(0, shuffled_rows.size, batch_size)]
  if len(batches) > 1 and batches[-1].size == 1:
    batches[-2] = numpy.concatenate([batches[-2], batches[-1]])
    del batches[-1]

  return batches


def _CheckFairnessGroups(dataset, fairness_spec):
  """Checks that the training split contains the groups a mode requires.

  Args:
    dataset (EncodedDataset): encoded dataset.
    fairness_spec (FairnessSpec): fairness settings.

  Raises:
    ConfigurationError: if a required group is absent from the training
        split.
  """
  for attribute in fairness_spec.attributes:
    mask = dataset.masks.GetMask(attribute)[dataset.train_idx]
    number_of_protected = int(mask.sum())
    missing_group = number_of_protected == 0
    if fairness_spec.mode != definitions.FAIRNESS_MODE_COMBINED:
      missing_group = missing_group or number_of_protected == mask.size

    if missing_group:
      raise errors.ConfigurationError(
          f'Fairness mode: {fairness_spec.mode:s} requires protected and '
          f'non-protected {attribute:s} groups in the training split.')


def _CheckSplit(dataset):
  """Checks the split of a dataset.

  Args:
    dataset (EncodedDataset): encoded dataset.

  Raises:
    ConfigurationError: if the split is missing or degenerate.
  """
  if dataset.train_idx is None or dataset.valid_idx is None:
    raise errors.ConfigurationError('Dataset has no training split.')

  if dataset.train_idx.size < 2:
    raise errors.ConfigurationError(
        f'Training split needs at least 2 rows, got: '
        f'{dataset.train_idx.size:d}.')

  if dataset.valid_idx.size == 0:
    raise errors.ConfigurationError('Validation split is empty.')


def Train(dataset, config):
  """Trains a network with early stopping.

  Every epoch shuffles the training rows into stratified batches and applies
  one Adam update per batch. The validation total loss is evaluated after
  every epoch and training stops once it has not improved for patience
  epochs. The parameters of the best epoch are returned.

  Args:
    dataset (EncodedDataset): encoded dataset with a split.
    config (TrainConfig): training settings.

  Returns:
    tuple[ModelParams, TrainTrace]: parameters of the best epoch and the
        training trace.

  Raises:
    ConfigurationError: if the settings or the split are not valid.
  """
  config.Validate()
  _CheckSplit(dataset)

  fairness_spec = config.fairness
  if IsFairnessActive(fairness_spec):
    _CheckFairnessGroups(dataset, fairness_spec)

  layer_sizes = (
      [dataset.features.shape[1]] + list(config.hidden_sizes) + [1])
  params = network.InitParams(
      layer_sizes, rng_module.Rng(config.seed, stream=INITIALIZATION_STREAM))
  shuffle_rng = rng_module.Rng(config.seed, stream=SHUFFLE_STREAM)

  trace = data_types.TrainTrace()
  train_predictions = Predict(params, dataset, dataset.train_idx)
  trace.initial_prediction_loss, _ = losses.BCELoss(
      train_predictions, dataset.labels[dataset.train_idx])

  best_params = params.Copy()
  best_validation_loss = None
  epochs_without_improvement = 0

  for epoch in range(1, config.epochs + 1):
    batch_losses = []
    for batch in StratifiedBatches(
        dataset.train_idx, dataset.masks, config.batch_size, shuffle_rng):
      values, cache = BatchLoss(
          params, dataset.features[batch], dataset.labels[batch],
          dataset.masks.Subset(batch), fairness_spec, definitions.MODE_TRAIN)

      if values['empty_group']:
        trace.empty_group_batches += 1
        logging.debug(
            f'Epoch: {epoch:d} batch without a required group, fairness '
            f'term skipped.')

      gradients = network.Backward(
          params, cache, values['prediction_gradients'])
      optimizers.AdamStep(params, gradients, config.learning_rate)

      batch_losses.append((
          values['prediction_loss'], values['fairness_loss'],
          values['total_loss']))

    prediction_loss, fairness_loss, total_loss = (
        float(value) for value in numpy.mean(batch_losses, axis=0))
    validation_loss = EvaluateTotalLoss(
        params, dataset, dataset.valid_idx, fairness_spec)

    trace.epochs.append(data_types.EpochRecord(
        prediction_loss, fairness_loss, total_loss, validation_loss))
    trace.stopped_epoch = epoch

    logging.debug(
        f'Epoch: {epoch:d} train loss: {total_loss:.6f} validation loss: '
        f'{validation_loss:.6f}')

    if best_validation_loss is None or validation_loss < best_validation_loss:
      best_validation_loss = validation_loss
      best_params = params.Copy()
      trace.best_epoch = epoch
      epochs_without_improvement = 0
    else:
      epochs_without_improvement += 1
      if epochs_without_improvement >= config.patience:
        break

  if trace.empty_group_batches:
    logging.warning(
        f'Fairness term skipped in: {trace.empty_group_batches:d} batches '
        f'without a required group.')

  return best_params, trace
