# -*- coding: utf-8 -*-
"""Tests for the multi-seed experiment sweeps."""

import math
import unittest

import mock
import pandas

from fairrank import data_types
from fairrank import definitions
from fairrank import errors
from fairrank import experiments
from fairrank import reader
from fairrank import training

from tests import test_lib


class ExperimentsTestCase(test_lib.BaseTestCase):
  """Shared functionality for experiment tests."""

  _REGIMES = reader.ReadDefaultBiasRegimes()

  def _CreatePlan(self, regime_name='fair'):
    """Creates a small experiment plan.

    Args:
      regime_name (Optional[str]): name of the bias regime.

    Returns:
      ExperimentPlan: experiment plan.
    """
    plan = data_types.ExperimentPlan()
    plan.lambdas = [2.0]
    plan.modes = [
        definitions.FAIRNESS_MODE_RACE_ONLY,
        definitions.FAIRNESS_MODE_COMBINED]
    plan.n_papers = 80
    plan.regime = regime_name
    plan.seeds = 2
    plan.threads = 1
    plan.train_config.batch_size = 16
    plan.train_config.epochs = 2
    plan.weights = [(0.32, 0.68)]
    return plan

  def _GetRegime(self, plan):
    """Retrieves the bias regime of a plan.

    Args:
      plan (ExperimentPlan): experiment plan.

    Returns:
      BiasRegime: bias regime.
    """
    return self._REGIMES.GetDefinitionByName(plan.regime)


class CellsTest(ExperimentsTestCase):
  """Cell grid tests."""

  def testGetLambdaGrid(self):
    """Tests the GetLambdaGrid function."""
    plan = data_types.ExperimentPlan()
    self.assertEqual(
        experiments.GetLambdaGrid(plan), [0.0, 1.0, 2.0, 2.5, 3.0, 5.0, 10.0])

    plan.lambdas = [3, 1.0, 1.0, 0.0]
    self.assertEqual(experiments.GetLambdaGrid(plan), [0.0, 1.0, 3.0])

  def testGetCells(self):
    """Tests the GetCells function."""
    plan = data_types.ExperimentPlan()

    cells = experiments.GetCells(plan)
    self.assertEqual(len(cells), 7 + 7 + 7 * 3)

    race_cells = [
        cell for cell in cells
        if cell.mode == definitions.FAIRNESS_MODE_RACE_ONLY]
    self.assertEqual(len(race_cells), 7)
    self.assertEqual(
        (race_cells[0].w_race, race_cells[0].w_country), (1.0, 0.0))
    self.assertEqual(race_cells[0].lambda_value, 0.0)

    country_cells = [
        cell for cell in cells
        if cell.mode == definitions.FAIRNESS_MODE_COUNTRY_ONLY]
    self.assertEqual(
        (country_cells[-1].w_race, country_cells[-1].w_country), (0.0, 1.0))
    self.assertEqual(country_cells[-1].lambda_value, 10.0)

    combined_weights = set(
        (cell.w_race, cell.w_country) for cell in cells
        if cell.mode == definitions.FAIRNESS_MODE_COMBINED)
    self.assertEqual(
        combined_weights, set([(0.32, 0.68), (0.32, 1.36), (0.64, 0.68)]))

  def testGetDefaultAcceptCount(self):
    """Tests the GetDefaultAcceptCount function."""
    plan = data_types.ExperimentPlan()
    self.assertEqual(experiments.GetDefaultAcceptCount(plan, 530), 280)
    self.assertEqual(experiments.GetDefaultAcceptCount(plan, 2), 1)

    plan.conference_shaped = True
    self.assertEqual(experiments.GetDefaultAcceptCount(plan, 530), 351)

    plan.n_accept = 40
    self.assertEqual(experiments.GetDefaultAcceptCount(plan, 530), 40)

  def testGetPlanSummary(self):
    """Tests the GetPlanSummary function."""
    plan = self._CreatePlan()

    plan_summary = experiments.GetPlanSummary(plan)
    self.assertEqual(plan_summary['lambdas'], [0.0, 2.0])
    self.assertEqual(plan_summary['seeds'], [1, 2])
    self.assertEqual(plan_summary['weights'], [[0.32, 0.68]])
    self.assertEqual(plan_summary['training']['epochs'], 2)


class TablesTest(ExperimentsTestCase):
  """Sweep and aggregate table tests."""

  def _CreateRecordValues(self, mode, lambda_value, seed, gain, error=None):
    """Creates run record values.

    Args:
      mode (str): fairness mode.
      lambda_value (float): lambda.
      seed (int): seed.
      gain (float): value of every gain.
      error (Optional[str]): error message.

    Returns:
      dict[str, object]: run record values.
    """
    record = experiments.RunRecord(
        data_types.FairnessSpec(mode=mode, lambda_value=lambda_value), seed)
    record.error = error
    if not error:
      record.best_epoch = 2
      record.best_validation_loss = 0.5
      record.empty_group_batches = 0
      record.stopped_epoch = 3
      record.parity_gap = {'race': 0.1, 'country': 0.2}

      record.metrics = data_types.MetricsReport()
      record.metrics.macro_gain = {'race': gain, 'country': gain}
      record.metrics.micro_gain = {'race': gain, 'country': gain}
      record.metrics.utility_gain = gain
      record.metrics.diversity_gain = gain
      record.metrics.f_measure = gain

    return record.CopyToDict()

  def testSweepTable(self):
    """Tests the SweepTable function."""
    sweep_table = experiments.SweepTable([
        self._CreateRecordValues('race_only', 1.0, 1, 10.0),
        self._CreateRecordValues('race_only', 1.0, 2, 0.0, error='failed')])

    self.assertEqual(list(sweep_table.columns), list(experiments.SWEEP_COLUMNS))
    self.assertEqual(sweep_table['error'].tolist(), ['', 'failed'])
    self.assertEqual(sweep_table['macro_gain_race'][0], 10.0)
    self.assertTrue(math.isnan(sweep_table['macro_gain_race'][1]))
    self.assertEqual(sweep_table['stopped_epoch'][0], 3)
    self.assertTrue(pandas.isna(sweep_table['stopped_epoch'][1]))
    self.assertEqual(sweep_table['parity_gap_country'][0], 0.2)

  def testAggregateTable(self):
    """Tests the AggregateTable function."""
    sweep_table = experiments.SweepTable([
        self._CreateRecordValues('combined', 1.0, 1, 4.0),
        self._CreateRecordValues('race_only', 2.0, 1, 1.0),
        self._CreateRecordValues('race_only', 2.0, 2, 3.0),
        self._CreateRecordValues('race_only', 2.0, 3, 0.0, error='failed'),
        self._CreateRecordValues('race_only', 0.0, 1, 5.0)])

    aggregate_table = experiments.AggregateTable(sweep_table)
    self.assertEqual(len(aggregate_table), 3)
    self.assertEqual(
        aggregate_table['mode'].tolist(),
        ['race_only', 'race_only', 'combined'])
    self.assertEqual(aggregate_table['lambda'].tolist(), [0.0, 2.0, 1.0])

    self.assertEqual(aggregate_table['runs'].tolist(), [1, 2, 1])
    self.assertEqual(aggregate_table['errors'].tolist(), [0, 1, 0])

    self.assertEqual(aggregate_table['macro_gain_race_mean'][0], 5.0)
    self.assertEqual(aggregate_table['macro_gain_race_std'][0], 0.0)
    self.assertEqual(aggregate_table['macro_gain_race_mean'][1], 2.0)
    self.assertAlmostEqual(
        aggregate_table['macro_gain_race_std'][1], math.sqrt(2.0))
    self.assertEqual(aggregate_table['f_measure_std'][2], 0.0)


class RunTest(ExperimentsTestCase):
  """Experiment run tests."""

  def testRunSingle(self):
    """Tests the RunSingle function with a zero lambda."""
    plan = self._CreatePlan()
    fairness_spec = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_RACE_ONLY, lambda_value=0.0)

    record = experiments.RunSingle(
        plan, fairness_spec, 1, regime=self._GetRegime(plan))

    self.assertIsNone(record.error)
    self.assertEqual(record.n_accept, 42)
    self.assertEqual(len(record.selected_ids), 42)
    self.assertEqual(record.metrics.distribution_axis, definitions.AXIS_TIER)

    # A zero lambda run reproduces the baseline selection.
    self.assertEqual(record.metrics.macro_gain['race'], 0.0)
    self.assertEqual(record.metrics.macro_gain['country'], 0.0)
    self.assertEqual(record.metrics.utility_gain, 0.0)
    self.assertEqual(record.metrics.diversity_gain, 0.0)
    self.assertEqual(record.metrics.f_measure, 0.0)

  def testRunSingleConferenceShaped(self):
    """Tests the RunSingle function on a conference shaped corpus."""
    plan = self._CreatePlan()
    plan.conference_shaped = True
    fairness_spec = data_types.FairnessSpec(
        mode=definitions.FAIRNESS_MODE_COMBINED, lambda_value=2.5)

    record = experiments.RunSingle(plan, fairness_spec, 1)

    self.assertEqual(record.n_accept, 351)
    self.assertEqual(
        record.metrics.distribution_axis, definitions.AXIS_CONFERENCE)
    self.assertEqual(
        list(record.metrics.distribution.keys()), ['SIGCHI', 'DIS', 'IUI'])
    self.assertEqual(record.metrics.n_features, 2)

  def testRunSingleWithErrors(self):
    """Tests the RunSingle function with invalid settings."""
    plan = self._CreatePlan()

    with self.assertRaisesRegex(errors.ConfigurationError, 'lambda'):
      experiments.RunSingle(
          plan, data_types.FairnessSpec(lambda_value=-1.0), 1,
          regime=self._GetRegime(plan))

    with self.assertRaises(errors.ConfigurationError):
      experiments.RunSingle(plan, data_types.FairnessSpec(), 1)

  def testRunSeedWithoutRegime(self):
    """Tests the RunSeed function without a bias regime."""
    plan = self._CreatePlan()
    cells = experiments.GetCells(plan)

    records = experiments.RunSeed(plan, 1, cells)
    self.assertEqual(len(records), len(cells))
    for record in records:
      self.assertIn('ConfigurationError', record.error)
      self.assertIsNone(record.metrics)

  def testRunPlan(self):
    """Tests the RunPlan function."""
    plan = self._CreatePlan()

    sweep_result = experiments.RunPlan(plan, regime=self._GetRegime(plan))
    sweep_table = sweep_result.GetSweepTable()

    self.assertEqual(len(sweep_result.records), 4 * 2)
    self.assertEqual(sweep_table['error'].tolist(), [''] * 8)
    self.assertEqual(
        sweep_table['mode'].tolist(),
        ['race_only'] * 4 + ['combined'] * 4)
    self.assertEqual(sweep_table['seed'].tolist(), [1, 2] * 4)
    self.assertEqual(sweep_result.plan['lambdas'], [0.0, 2.0])

    aggregate_table = sweep_result.GetAggregateTable()
    self.assertEqual(len(aggregate_table), 4)
    self.assertEqual(aggregate_table['runs'].tolist(), [2] * 4)

    second_result = experiments.RunPlan(plan, regime=self._GetRegime(plan))
    pandas.testing.assert_frame_equal(
        second_result.GetSweepTable(), sweep_table)

  def testRunPlanWorkers(self):
    """Tests that worker processes do not change the results."""
    plan = self._CreatePlan()
    plan.modes = [definitions.FAIRNESS_MODE_COUNTRY_ONLY]

    sweep_table = experiments.RunPlan(
        plan, regime=self._GetRegime(plan)).GetSweepTable()

    plan.threads = 2
    parallel_table = experiments.RunPlan(
        plan, regime=self._GetRegime(plan)).GetSweepTable()

    pandas.testing.assert_frame_equal(parallel_table, sweep_table)

  def testRunPlanFailedCell(self):
    """Tests that a failing cell does not abort the sweep."""
    plan = self._CreatePlan()
    original_train = training.Train

    def _Train(dataset, config):
      fairness_spec = config.fairness
      if fairness_spec and fairness_spec.lambda_value == 2.0 and (
          fairness_spec.mode == definitions.FAIRNESS_MODE_COMBINED):
        raise errors.NumericError('Non-finite loss.')
      return original_train(dataset, config)

    with mock.patch('fairrank.training.Train', new=_Train):
      sweep_result = experiments.RunPlan(plan, regime=self._GetRegime(plan))

    sweep_table = sweep_result.GetSweepTable()
    failed = sweep_table[sweep_table['error'] != '']
    self.assertEqual(len(failed), 2)
    self.assertEqual(failed['mode'].tolist(), ['combined'] * 2)
    self.assertEqual(failed['lambda'].tolist(), [2.0, 2.0])
    self.assertEqual(
        failed['error'].tolist(), ['NumericError: Non-finite loss.'] * 2)

    aggregate_table = sweep_result.GetAggregateTable()
    self.assertEqual(aggregate_table['errors'].tolist(), [0, 0, 0, 2])
    self.assertEqual(aggregate_table['runs'].tolist(), [2, 2, 2, 0])
    self.assertTrue(math.isnan(aggregate_table['f_measure_mean'][3]))
    self.assertFalse(math.isnan(aggregate_table['f_measure_mean'][2]))

  def testRunPlanFairnessTrend(self):
    """Tests that a strong fairness term selects more protected papers."""
    plan = self._CreatePlan(regime_name='high')
    plan.lambdas = [10.0]
    plan.modes = [definitions.FAIRNESS_MODE_RACE_ONLY]
    plan.n_papers = 300
    plan.train_config.epochs = 10

    aggregate_table = experiments.RunPlan(
        plan, regime=self._GetRegime(plan)).GetAggregateTable()

    self.assertEqual(aggregate_table['lambda'].tolist(), [0.0, 10.0])
    gains = aggregate_table['macro_gain_race_mean'].tolist()
    self.assertEqual(gains[0], 0.0)
    self.assertGreater(gains[1], gains[0])


class FairnessTradeOffTest(ExperimentsTestCase):
  """Fairness and utility trade-off tests on 1000 paper corpora."""

  def _GetRaceOnlyGains(self, regime_name):
    """Runs a race only plan with lambda 3 and default training settings.

    Args:
      regime_name (str): name of the bias regime.

    Returns:
      pandas.Series: aggregate row of lambda 3.
    """
    plan = data_types.ExperimentPlan()
    plan.lambdas = [3.0]
    plan.modes = [definitions.FAIRNESS_MODE_RACE_ONLY]
    plan.n_papers = 1000
    plan.regime = regime_name
    plan.seeds = 5
    plan.threads = 1

    aggregate_table = experiments.RunPlan(
        plan, regime=self._GetRegime(plan)).GetAggregateTable()
    self.assertEqual(aggregate_table['lambda'].tolist(), [0.0, 3.0])
    self.assertEqual(aggregate_table['errors'].tolist(), [0, 0])

    return aggregate_table.iloc[1]

  def testHighBiasGains(self):
    """Tests the gains of fairness-aware selection under high bias."""
    row = self._GetRaceOnlyGains('high')

    self.assertGreaterEqual(row['macro_gain_race_mean'], 10.0)
    self.assertGreaterEqual(row['micro_gain_race_mean'], 10.0)
    self.assertGreaterEqual(row['utility_gain_mean'], -5.0)

  def testFairRegimeGains(self):
    """Tests that fairness-aware selection changes little without bias."""
    row = self._GetRaceOnlyGains('fair')

    self.assertLessEqual(abs(row['macro_gain_race_mean']), 10.0)


if __name__ == '__main__':
  unittest.main()
