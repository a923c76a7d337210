# -*- coding: utf-8 -*-
"""Tests for the mini-batch training."""

import unittest

import numpy

from fairrank import data_types
from fairrank import definitions
from fairrank import encoding
from fairrank import errors
from fairrank import reader
from fairrank import synthesis
from fairrank import training
from fairrank.model import network
from fairrank.model import rng as rng_module

from tests import test_lib


class TrainingTestCase(test_lib.BaseTestCase):
  """Shared functionality for training tests."""

  _REGIMES = reader.ReadDefaultBiasRegimes()

  def _CreateSyntheticDataset(self, regime_name, n_papers, seed):
    """Creates a split synthetic dataset.

    Args:
      regime_name (str): name of the bias regime.
      n_papers (int): number of papers.
      seed (int): seed of the corpus and split.

    Returns:
      EncodedDataset: encoded dataset with a split.
    """
    regime = self._REGIMES.GetDefinitionByName(regime_name)
    papers, authors = synthesis.GenerateSynthetic(
        regime, n_papers, rng_module.Rng(seed, stream=0))
    dataset = encoding.Encode(
        papers, authors, definitions.DEFAULT_STAGE_WEIGHTS)
    return encoding.StratifiedSplit(
        dataset, 0.8, rng_module.Rng(seed, stream=3))


class BatchLossTest(TrainingTestCase):
  """Batch loss tests."""

  def testIsFairnessActive(self):
    """Tests the IsFairnessActive function."""
    self.assertFalse(training.IsFairnessActive(None))
    self.assertFalse(training.IsFairnessActive(data_types.FairnessSpec()))
    self.assertTrue(training.IsFairnessActive(
        data_types.FairnessSpec(lambda_value=0.5)))

  def testBatchLoss(self):
    """Tests the BatchLoss function."""
    params = network.ModelParams([2, 4, 2, 1])
    features = numpy.zeros((4, 2))
    labels = numpy.array([1.0, 0.0, 1.0, 0.0])
    masks = data_types.GroupMasks(
        [True, False, True, False], [False, False, True, True])

    fairness_spec = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_COMBINED, lambda_value=2.0)
    values, _ = training.BatchLoss(
        params, features, labels, masks, fairness_spec,
        definitions.MODE_TRAIN)

    self.assertAlmostEqual(values['prediction_loss'], numpy.log(2.0))
    self.assertEqual(values['fairness_loss'], 0.0)
    self.assertAlmostEqual(values['total_loss'], numpy.log(2.0))
    self.assertFalse(values['empty_group'])

    masks = data_types.GroupMasks([False] * 4, [False] * 4)
    values, _ = training.BatchLoss(
        params, features, labels, masks, fairness_spec,
        definitions.MODE_TRAIN)
    self.assertTrue(values['empty_group'])
    self.assertAlmostEqual(values['total_loss'], numpy.log(2.0))

  def _CheckTotalLossGradients(self, seed):
    """Checks the total loss gradients of a random instance.

    The instance has random layer widths of at most 8 units and a batch of 2
    to 12 rows that holds protected and other rows for both attributes.

    Args:
      seed (int): seed of the instance.
    """
    generator = rng_module.Rng(seed, stream=7)
    layer_sizes = [int(width) for width in generator.Integers(1, 9, size=3)]
    params = network.InitParams(layer_sizes + [1], generator)

    batch_size = int(generator.Integers(2, 13))
    features = generator.Normal(0.0, 1.0, size=(batch_size, layer_sizes[0]))
    labels = (generator.Random(size=batch_size) < 0.5).astype(numpy.float64)

    race_mask = generator.Random(size=batch_size) < 0.5
    race_mask[:2] = [True, False]
    country_mask = generator.Random(size=batch_size) < 0.5
    country_mask[:2] = [False, True]
    masks = data_types.GroupMasks(race_mask, country_mask)

    mode = definitions.FAIRNESS_MODES[seed % 3]
    fairness_spec = data_types.FairnessSpec(
        mode=mode, lambda_value=float(generator.Uniform(0.5, 10.0)),
        w_race=0.32, w_country=1.36)

    values, cache = training.BatchLoss(
        params, features, labels, masks, fairness_spec,
        definitions.MODE_TRAIN)
    gradients = network.Backward(
        params, cache, values['prediction_gradients'])

    def _Objective():
      objective_values, _ = training.BatchLoss(
          params, features, labels, masks, fairness_spec,
          definitions.MODE_TRAIN)
      return objective_values['total_loss']

    for name, value in params.GetParameters().items():
      numerical_gradient = test_lib.CentralDifference(_Objective, value)
      error = numpy.abs(gradients[name] - numerical_gradient)
      tolerance = 1e-4 * numpy.maximum(
          numpy.abs(gradients[name]), numpy.abs(numerical_gradient)) + 1e-7
      self.assertTrue(
          numpy.all(error <= tolerance),
          msg=f'seed: {seed:d} {mode:s} {name:s} {layer_sizes!s}')

  def testTotalLossGradients(self):
    """Tests the total loss gradients against central finite differences."""
    for seed in range(20):
      self._CheckTotalLossGradients(seed)

  def testParityGap(self):
    """Tests the ParityGap function."""
    dataset = self._CreateEncodedDataset(
        [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]], [1, 0, 1],
        [True, False, False], [False, True, False])
    params = network.ModelParams([2, 4, 2, 1])

    gap = training.ParityGap(
        params, dataset, numpy.arange(3), definitions.ATTRIBUTE_RACE)
    self.assertEqual(gap, 0.0)

    with self.assertRaises(errors.EmptyGroupError):
      training.ParityGap(
          params, dataset, numpy.array([1, 2]), definitions.ATTRIBUTE_RACE)


class StratifiedBatchesTest(test_lib.BaseTestCase):
  """Stratified batches tests."""

  def testStratifiedBatches(self):
    """Tests the StratifiedBatches function."""
    masks = data_types.GroupMasks([True, False] * 8, [False] * 16)

    batches = training.StratifiedBatches(
        numpy.arange(16), masks, 4, rng_module.Rng(1, stream=2))

    self.assertEqual([batch.size for batch in batches], [4, 4, 4, 4])
    self.assertEqual(
        sorted(numpy.concatenate(batches).tolist()), list(range(16)))
    for batch in batches:
      self.assertEqual(int(masks.protected_race[batch].sum()), 2)

  def testStratifiedBatchesTrailingRow(self):
    """Tests that a trailing single row batch is merged."""
    masks = data_types.GroupMasks(
        [False] * 11 + [True] * 10, [False] * 15 + [True] * 6)

    batches = training.StratifiedBatches(
        numpy.arange(21), masks, 4, rng_module.Rng(1, stream=2))

    self.assertEqual([batch.size for batch in batches], [4, 4, 4, 4, 5])
    self.assertEqual(
        sorted(numpy.concatenate(batches).tolist()), list(range(21)))

  def testStratifiedBatchesSubset(self):
    """Tests the StratifiedBatches function on a subset of rows."""
    masks = data_types.GroupMasks([True, False] * 10, [False] * 20)
    indices = numpy.array([1, 2, 5, 8, 13, 16, 17])

    batches = training.StratifiedBatches(
        indices, masks, 32, rng_module.Rng(3, stream=2))
    self.assertEqual(len(batches), 1)
    self.assertEqual(sorted(batches[0].tolist()), indices.tolist())


class TrainTest(TrainingTestCase):
  """Training tests."""

  def testTrain(self):
    """Tests the Train function."""
    generator = rng_module.Rng(5)
    features = generator.Random(size=(200, 3))
    labels = (features[:, 0] > 0.5).astype(int)
    race_flags = generator.Random(size=200) < 0.3
    dataset = self._CreateEncodedDataset(
        features.tolist(), labels.tolist(), race_flags.tolist(),
        [False] * 200)
    dataset = encoding.StratifiedSplit(dataset, 0.8, rng_module.Rng(5))

    config = data_types.TrainConfig(
        epochs=20, batch_size=16, learning_rate=0.01, patience=5, seed=3,
        hidden_sizes=[8, 4])
    params, trace = training.Train(dataset, config)

    self.assertEqual(params.layer_sizes, [3, 8, 4, 1])
    self.assertEqual(len(trace.epochs), trace.stopped_epoch)
    self.assertTrue(1 <= trace.best_epoch <= trace.stopped_epoch)
    self.assertLessEqual(trace.stopped_epoch - trace.best_epoch, 5)
    self.assertLess(
        trace.best_validation_loss, trace.initial_prediction_loss)
    self.assertEqual(
        trace.epochs[trace.best_epoch - 1].validation_total_loss,
        trace.best_validation_loss)

    # The restored parameters reproduce the best validation loss.
    validation_loss = training.EvaluateTotalLoss(
        params, dataset, dataset.valid_idx, None)
    self.assertAlmostEqual(validation_loss, trace.best_validation_loss)

  def testTrainDeterminism(self):
    """Tests that the Train function is seed determined."""
    dataset = self._CreateSyntheticDataset('high', 120, 2)
    fairness_spec = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_COMBINED, lambda_value=2.5)

    config = data_types.TrainConfig(
        epochs=3, batch_size=16, seed=2, fairness=fairness_spec)
    first_params, first_trace = training.Train(dataset, config)
    second_params, second_trace = training.Train(dataset, config)

    self.assertTrue(first_params.IsIdentical(second_params))
    self.assertTrue(first_trace.IsIdentical(second_trace))

  def testTrainZeroLambda(self):
    """Tests that a zero lambda run equals a prediction loss only run."""
    dataset = self._CreateSyntheticDataset('high', 120, 3)

    config = data_types.TrainConfig(epochs=4, batch_size=16, seed=3)
    baseline_params, baseline_trace = training.Train(dataset, config)

    for mode in definitions.FAIRNESS_MODES:
      config.fairness = data_types.FairnessSpec(mode=mode, lambda_value=0.0)
      params, trace = training.Train(dataset, config)

      self.assertTrue(params.IsIdentical(baseline_params))
      self.assertTrue(trace.IsIdentical(baseline_trace))
      self.assertEqual(
          training.Predict(params, dataset).tobytes(),
          training.Predict(baseline_params, dataset).tobytes())

  def testTrainReducesParityGap(self):
    """Tests that a strong fairness term reduces the parity gap."""
    dataset = self._CreateSyntheticDataset('high', 530, 1)

    config = data_types.TrainConfig(epochs=15, batch_size=32, seed=1)
    params, _ = training.Train(dataset, config)
    unconstrained_gap = training.ParityGap(
        params, dataset, dataset.train_idx, definitions.ATTRIBUTE_RACE)

    config.fairness = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_RACE_ONLY, lambda_value=10.0)
    params, _ = training.Train(dataset, config)
    constrained_gap = training.ParityGap(
        params, dataset, dataset.train_idx, definitions.ATTRIBUTE_RACE)

    self.assertLess(constrained_gap, unconstrained_gap)

  def testTrainParityGapDecreasesWithLambda(self):
    """Tests that the validation parity gap is smaller with fairness."""
    gaps = {0.0: [], 3.0: []}
    for seed in range(1, 6):
      dataset = self._CreateSyntheticDataset('high', 1000, seed)

      for lambda_value in sorted(gaps):
        config = data_types.TrainConfig(seed=seed)
        config.fairness = data_types.FairnessSpec(
            mode=definitions.FAIRNESS_MODE_RACE_ONLY,
            lambda_value=lambda_value)

        params, _ = training.Train(dataset, config)
        gap = training.ParityGap(
            params, dataset, dataset.valid_idx, definitions.ATTRIBUTE_RACE)
        gaps[lambda_value].append(abs(gap))

    self.assertLess(
        sum(gaps[3.0]) / len(gaps[3.0]), sum(gaps[0.0]) / len(gaps[0.0]))

  def testTrainWithErrors(self):
    """Tests the Train function with invalid settings."""
    dataset = self._CreateEncodedDataset(
        [[0.0], [1.0], [0.5], [0.2], [0.7]], [1, 0, 1, 0, 1],
        [False, False, False, False, True], [True, False, True, False, False])

    config = data_types.TrainConfig(epochs=2, batch_size=2)
    with self.assertRaisesRegex(errors.ConfigurationError, 'split'):
      training.Train(dataset, config)

    split_dataset = dataset.CopyWithSplit(
        numpy.array([0, 1, 2, 3]), numpy.array([4]))

    config.fairness = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_RACE_ONLY, lambda_value=1.0)
    with self.assertRaisesRegex(errors.ConfigurationError, 'race'):
      training.Train(split_dataset, config)

    config.fairness = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_COMBINED, lambda_value=1.0)
    with self.assertRaisesRegex(errors.ConfigurationError, 'race'):
      training.Train(split_dataset, config)

    split_dataset = dataset.CopyWithSplit(
        numpy.array([0, 1, 2, 3, 4]), numpy.array([], dtype=numpy.int64))
    config.fairness = None
    with self.assertRaises(errors.ConfigurationError):
      training.Train(split_dataset, config)

    config = data_types.TrainConfig(epochs=0)
    with self.assertRaises(errors.ConfigurationError):
      training.Train(dataset.CopyWithSplit(
          numpy.array([0, 1, 2]), numpy.array([3, 4])), config)


if __name__ == '__main__':
  unittest.main()
