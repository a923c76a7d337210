# -*- coding: utf-8 -*-
"""Multi-seed experiment sweeps over fairness settings."""

import concurrent.futures
import copy
import logging
import math
import os

import pandas

from fairrank import corpus
from fairrank import data_types
from fairrank import definitions
from fairrank import encoding
from fairrank import errors
from fairrank import metrics
from fairrank import selection
from fairrank import synthesis
from fairrank import training
from fairrank.model import rng as rng_module


# Random number streams of a seed, training uses streams of its own.
CORPUS_STREAM = 0
SPLIT_STREAM = 3

CELL_COLUMNS = ('mode', 'lambda', 'w_race', 'w_country')

METRIC_COLUMNS = (
    'macro_gain_race', 'macro_gain_country', 'micro_gain_race',
    'micro_gain_country', 'utility_gain', 'diversity_gain', 'f_measure',
    'parity_gap_race', 'parity_gap_country', 'best_validation_loss')

SWEEP_COLUMNS = CELL_COLUMNS + ('seed', ) + METRIC_COLUMNS + (
    'stopped_epoch', 'best_epoch', 'empty_group_batches', 'error')

# Exceptions of a single cell that do not abort the sweep.
CELL_EXCEPTIONS = (errors.Error, ArithmeticError, ValueError)


class RunRecord(object):
  """Result of one fairness setting on one seed.

  Attributes:
    best_epoch (int): 1-based epoch of the restored parameters.
    best_validation_loss (float): validation total loss of the restored
        parameters.
    empty_group_batches (int): number of batches without a required group.
    error (str): error message or None if the run succeeded.
    fairness (FairnessSpec): fairness settings.
    metrics (MetricsReport): metrics against the baseline.
    n_accept (int): number of selected papers.
    parity (dict[str, dict[str, float]]): parity statistics of the selection.
    parity_gap (dict[str, float]): absolute validation parity gap of the
        predictions per attribute.
    seed (int): seed.
    selected_ids (list[str]): selected paper identifiers or None if not kept.
    stopped_epoch (int): number of epochs run.
  """

  def __init__(self, fairness_spec, seed):
    """Initializes a run record.

    Args:
      fairness_spec (FairnessSpec): fairness settings.
      seed (int): seed.
    """
    super(RunRecord, self).__init__()
    self.best_epoch = None
    self.best_validation_loss = None
    self.empty_group_batches = None
    self.error = None
    self.fairness = fairness_spec
    self.metrics = None
    self.n_accept = None
    self.parity = {}
    self.parity_gap = {}
    self.seed = seed
    self.selected_ids = None
    self.stopped_epoch = None

  @property
  def cell_key(self):
    """tuple[str, float, float, float]: mode, lambda and weights."""
    return (
        self.fairness.mode, self.fairness.lambda_value, self.fairness.w_race,
        self.fairness.w_country)

  def CopyToDict(self):
    """Copies the record to a dictionary.

    Returns:
      dict[str, object]: record values.
    """
    values = {
        'best_epoch': self.best_epoch,
        'best_validation_loss': self.best_validation_loss,
        'empty_group_batches': self.empty_group_batches,
        'error': self.error,
        'lambda': self.fairness.lambda_value,
        'metrics': self.metrics.CopyToDict() if self.metrics else None,
        'mode': self.fairness.mode,
        'n_accept': self.n_accept,
        'parity': copy.deepcopy(self.parity),
        'parity_gap': dict(self.parity_gap),
        'seed': self.seed,
        'stopped_epoch': self.stopped_epoch,
        'w_country': self.fairness.w_country,
        'w_race': self.fairness.w_race}
    if self.selected_ids is not None:
      values['selected_ids'] = list(self.selected_ids)
    return values


def _GetFloat(value):
  """Converts an optional value to a float, None is NaN."""
  return math.nan if value is None else float(value)


def GetSweepRow(values):
  """Retrieves the sweep table row of run record values.

  Args:
    values (dict[str, object]): run record values as returned by CopyToDict
        or read back from report.json.

  Returns:
    dict[str, object]: value per sweep column.
  """
  row = {column: values[column] for column in CELL_COLUMNS}
  row['seed'] = values['seed']
  row['error'] = values['error'] or ''

  report = values['metrics'] or {}
  parity_gap = values['parity_gap'] or {}
  for attribute in definitions.PROTECTED_ATTRIBUTES:
    row[f'macro_gain_{attribute:s}'] = _GetFloat(
        report.get('macro_gain', {}).get(attribute, None))
    row[f'micro_gain_{attribute:s}'] = _GetFloat(
        report.get('micro_gain', {}).get(attribute, None))
    row[f'parity_gap_{attribute:s}'] = _GetFloat(
        parity_gap.get(attribute, None))

  for name in ('utility_gain', 'diversity_gain', 'f_measure'):
    row[name] = _GetFloat(report.get(name, None))

  row['best_validation_loss'] = _GetFloat(values['best_validation_loss'])
  for name in ('stopped_epoch', 'best_epoch', 'empty_group_batches'):
    row[name] = values[name]

  return row


def SweepTable(record_values):
  """Builds the sweep table of run record values.

  Args:
    record_values (list[dict[str, object]]): run record values.

  Returns:
    pandas.DataFrame: one row per cell and seed.
  """
  sweep_table = pandas.DataFrame(
      [GetSweepRow(values) for values in record_values],
      columns=list(SWEEP_COLUMNS))
  for name in ('seed', 'stopped_epoch', 'best_epoch', 'empty_group_batches'):
    sweep_table[name] = sweep_table[name].astype('Int64')
  return sweep_table


class SweepResult(object):
  """Result of an experiment plan.

  Attributes:
    plan (dict[str, object]): summary of the plan.
    records (list[RunRecord]): run records sorted by cell key and seed.
  """

  def __init__(self, plan_summary, records):
    """Initializes a sweep result.

    Args:
      plan_summary (dict[str, object]): summary of the plan.
      records (list[RunRecord]): run records.
    """
    super(SweepResult, self).__init__()
    self.plan = plan_summary
    self.records = sorted(records, key=_GetRecordSortKey)

  def GetAggregateTable(self):
    """Retrieves the mean and standard deviation per cell.

    Returns:
      pandas.DataFrame: one row per cell.
    """
    return AggregateTable(self.GetSweepTable())

  def GetSweepTable(self):
    """Retrieves the sweep table.

    Returns:
      pandas.DataFrame: one row per cell and seed.
    """
    return SweepTable([record.CopyToDict() for record in self.records])


def _GetModeOrder(mode):
  """Retrieves the sort order of a fairness mode."""
  if mode in definitions.FAIRNESS_MODES:
    return definitions.FAIRNESS_MODES.index(mode)
  return len(definitions.FAIRNESS_MODES)


def _GetRecordSortKey(record):
  """Retrieves the sort key of a run record."""
  mode, lambda_value, w_race, w_country = record.cell_key
  return (_GetModeOrder(mode), mode, lambda_value, w_race, w_country,
          record.seed)


def AggregateTable(sweep_table):
  """Aggregates a sweep table per cell.

  The standard deviation is the sample standard deviation, 0 for a cell
  with a single value. Failed runs are counted but not aggregated.

  Args:
    sweep_table (pandas.DataFrame): sweep table.

  Returns:
    pandas.DataFrame: mode, lambda, weights, number of runs and errors, and
        mean and standard deviation per metric, sorted by cell.
  """
  rows = []
  for cell_values, cell_table in sweep_table.groupby(
      list(CELL_COLUMNS), sort=False):
    row = dict(zip(CELL_COLUMNS, cell_values))

    succeeded = cell_table[cell_table['error'] == '']
    row['runs'] = int(len(succeeded))
    row['errors'] = int(len(cell_table) - len(succeeded))

    for column in METRIC_COLUMNS:
      values = succeeded[column].astype(float).dropna()
      if values.empty:
        mean = math.nan
        standard_deviation = math.nan
      else:
        mean = float(values.mean())
        standard_deviation = 0.0
        if len(values) > 1:
          standard_deviation = float(values.std(ddof=1))

      row[f'{column:s}_mean'] = mean
      row[f'{column:s}_std'] = standard_deviation

    rows.append(row)

  columns = list(CELL_COLUMNS) + ['runs', 'errors']
  for column in METRIC_COLUMNS:
    columns.extend([f'{column:s}_mean', f'{column:s}_std'])

  aggregate_table = pandas.DataFrame(rows, columns=columns)
  if not aggregate_table.empty:
    aggregate_table['_mode_order'] = aggregate_table['mode'].map(
        _GetModeOrder)
    aggregate_table = aggregate_table.sort_values(
        by=['_mode_order'] + list(CELL_COLUMNS), kind='mergesort').drop(
            columns=['_mode_order']).reset_index(drop=True)

  return aggregate_table


def GetLambdaGrid(plan):
  """Retrieves the lambda grid of a plan, which always includes 0.

  Args:
    plan (ExperimentPlan): experiment plan.

  Returns:
    list[float]: sorted distinct lambda values.
  """
  return sorted(set([0.0] + [float(value) for value in plan.lambdas]))


def GetCells(plan):
  """Retrieves the fairness settings of the cells of a plan.

  Single attribute modes have one cell per lambda with the weight of their
  attribute set to 1, the combined mode has one cell per lambda and weight
  pair.

  Args:
    plan (ExperimentPlan): experiment plan.

  Returns:
    list[FairnessSpec]: fairness settings per cell.
  """
  cells = []
  for mode in plan.modes:
    for lambda_value in GetLambdaGrid(plan):
      if mode == definitions.FAIRNESS_MODE_COMBINED:
        for w_race, w_country in plan.weights:
          cells.append(data_types.FairnessSpec(
              mode=mode, lambda_value=lambda_value, w_race=float(w_race),
              w_country=float(w_country)))

      elif mode == definitions.FAIRNESS_MODE_RACE_ONLY:
        cells.append(data_types.FairnessSpec(
            mode=mode, lambda_value=lambda_value, w_race=1.0, w_country=0.0))

      else:
        cells.append(data_types.FairnessSpec(
            mode=mode, lambda_value=lambda_value, w_race=0.0, w_country=1.0))

  return cells


class _SeedContext(object):
  """Data of one seed shared by all cells.

  Attributes:
    authors (list[AuthorRecord]): author records.
    axis (str): distribution axis.
    baseline (list[PaperRecord]): baseline papers.
    dataset (EncodedDataset): encoded and split dataset.
    n_accept (int): number of papers to select.
    papers (list[PaperRecord]): paper records.
    papers_by_identifier (dict[str, PaperRecord]): paper per identifier.
  """

  def __init__(self, papers, authors, dataset, n_accept, axis):
    """Initializes the data of a seed."""
    super(_SeedContext, self).__init__()
    self.authors = authors
    self.axis = axis
    self.baseline = None
    self.dataset = dataset
    self.n_accept = n_accept
    self.papers = papers
    self.papers_by_identifier = {paper.paper_id: paper for paper in papers}

  def GetPapers(self, paper_ids):
    """Retrieves papers by identifier.

    Args:
      paper_ids (list[str]): paper identifiers.

    Returns:
      list[PaperRecord]: papers.
    """
    return [self.papers_by_identifier[paper_id] for paper_id in paper_ids]


def LoadCorpus(plan, seed, regime=None):
  """Loads or generates the corpus of a seed.

  Args:
    plan (ExperimentPlan): experiment plan.
    seed (int): seed.
    regime (Optional[BiasRegime]): bias regime of a synthetic source.

  Returns:
    tuple[list[PaperRecord], list[AuthorRecord]]: paper and author records.

  Raises:
    ConfigurationError: if a synthetic source has no bias regime.
  """
  if plan.source == definitions.SOURCE_FILES:
    return corpus.LoadRecords(plan.papers_path, plan.authors_path)

  corpus_rng = rng_module.Rng(seed, stream=CORPUS_STREAM)
  if plan.conference_shaped:
    return synthesis.GenerateConferenceCorpus(
        corpus_rng, parameters=plan.synthesis,
        stage_weights=plan.stage_weights)

  if regime is None:
    raise errors.ConfigurationError(f'Unknown bias regime: {plan.regime!s}.')

  return synthesis.GenerateSynthetic(
      regime, plan.n_papers, corpus_rng, parameters=plan.synthesis,
      stage_weights=plan.stage_weights)


def GetDefaultAcceptCount(plan, number_of_papers):
  """Determines the number of papers to select.

  Args:
    plan (ExperimentPlan): experiment plan.
    number_of_papers (int): number of papers.

  Returns:
    int: configured number or the default share of the papers.
  """
  if plan.n_accept is not None:
    return plan.n_accept

  if plan.is_real_format:
    fraction = definitions.REAL_FORMAT_ACCEPT_FRACTION
  else:
    fraction = definitions.SYNTHETIC_ACCEPT_FRACTION
  return max(1, int(round(fraction * number_of_papers)))


def _PrepareSeed(plan, seed, regime):
  """Prepares the data and baseline of a seed.

  The baseline is the historical selection of real-format data and the
  selection of a model trained without fairness term otherwise.

  Args:
    plan (ExperimentPlan): experiment plan.
    seed (int): seed.
    regime (BiasRegime): bias regime or None.

  Returns:
    _SeedContext: data of the seed.
  """
  papers, authors = LoadCorpus(plan, seed, regime=regime)
  dataset = encoding.Encode(papers, authors, plan.stage_weights)
  dataset = encoding.StratifiedSplit(
      dataset, plan.train_fraction,
      rng_module.Rng(seed, stream=SPLIT_STREAM))

  if plan.is_real_format:
    axis = definitions.AXIS_CONFERENCE
  else:
    axis = definitions.AXIS_TIER

  context = _SeedContext(
      papers, authors, dataset, GetDefaultAcceptCount(plan, len(papers)), axis)

  if plan.is_real_format:
    context.baseline = [paper for paper in papers if paper.accepted == 1]
    if not context.baseline:
      raise errors.ConfigurationError('Corpus has no accepted papers.')
  else:
    train_config = copy.copy(plan.train_config)
    train_config.seed = seed
    train_config.fairness = None
    params, _ = training.Train(dataset, train_config)
    baseline_result = selection.RankAndSelect(
        params, dataset, context.n_accept)
    context.baseline = context.GetPapers(baseline_result.selected_ids)

  return context


def _RunCell(
    plan, context, fairness_spec, seed, keep_selection=False,
    raise_errors=False):
  """Runs one fairness setting on the data of a seed.

  Args:
    plan (ExperimentPlan): experiment plan.
    context (_SeedContext): data of the seed.
    fairness_spec (FairnessSpec): fairness settings.
    seed (int): seed.
    keep_selection (Optional[bool]): True to keep the selected identifiers.
    raise_errors (Optional[bool]): True to raise errors instead of recording
        them.

  Returns:
    RunRecord: run record.
  """
  record = RunRecord(fairness_spec, seed)
  try:
    train_config = copy.copy(plan.train_config)
    train_config.seed = seed
    train_config.fairness = fairness_spec

    params, trace = training.Train(context.dataset, train_config)
    record.best_epoch = trace.best_epoch
    record.best_validation_loss = trace.best_validation_loss
    record.empty_group_batches = trace.empty_group_batches
    record.stopped_epoch = trace.stopped_epoch

    for attribute in definitions.PROTECTED_ATTRIBUTES:
      try:
        record.parity_gap[attribute] = training.ParityGap(
            params, context.dataset, context.dataset.valid_idx, attribute)
      except errors.EmptyGroupError:
        record.parity_gap[attribute] = math.nan

    selection_result = selection.RankAndSelect(
        params, context.dataset, context.n_accept)
    record.n_accept = selection_result.n_accepted
    record.parity = selection_result.parity
    if keep_selection:
      record.selected_ids = list(selection_result.selected_ids)

    attributes = fairness_spec.attributes
    if not attributes:
      attributes = definitions.PROTECTED_ATTRIBUTES

    record.metrics = metrics.BuildMetricsReport(
        context.GetPapers(selection_result.selected_ids), context.baseline,
        context.authors, plan.stage_weights, attributes, context.axis)

  except CELL_EXCEPTIONS as exception:
    if raise_errors:
      raise

    record.error = f'{type(exception).__name__:s}: {exception!s}'
    logging.warning(
        f'Cell: {record.cell_key!s} seed: {seed:d} failed with error: '
        f'{record.error:s}')

  return record


def RunSeed(plan, seed, cells, regime=None):
  """Runs all cells on one seed.

  Args:
    plan (ExperimentPlan): experiment plan.
    seed (int): seed.
    cells (list[FairnessSpec]): fairness settings per cell.
    regime (Optional[BiasRegime]): bias regime of a synthetic source.

  Returns:
    list[RunRecord]: run record per cell.
  """
  try:
    context = _PrepareSeed(plan, seed, regime)
  except CELL_EXCEPTIONS as exception:
    error = f'{type(exception).__name__:s}: {exception!s}'
    logging.warning(f'Seed: {seed:d} failed with error: {error:s}')

    records = []
    for fairness_spec in cells:
      record = RunRecord(fairness_spec, seed)
      record.error = error
      records.append(record)
    return records

  logging.info(f'Seed: {seed:d} running {len(cells):d} cells.')
  return [
      _RunCell(plan, context, fairness_spec, seed) for fairness_spec in cells]


def RunSingle(plan, fairness_spec, seed, regime=None):
  """Runs a single fairness setting on one seed.

  Unlike a sweep cell, data and training errors are raised.

  Args:
    plan (ExperimentPlan): experiment plan.
    fairness_spec (FairnessSpec): fairness settings.
    seed (int): seed.
    regime (Optional[BiasRegime]): bias regime of a synthetic source.

  Returns:
    RunRecord: run record including the selected identifiers.

  Raises:
    ConfigurationError: if the plan or fairness settings are not valid.
    Error: if the data cannot be prepared or the run fails.
  """
  plan.Validate()
  fairness_spec.Validate()

  context = _PrepareSeed(plan, seed, regime)
  return _RunCell(
      plan, context, fairness_spec, seed, keep_selection=True,
      raise_errors=True)


def GetPlanSummary(plan):
  """Summarizes a plan.

  Args:
    plan (ExperimentPlan): experiment plan.

  Returns:
    dict[str, object]: plan values.
  """
  return {
      'base_seed': plan.base_seed,
      'conference_shaped': plan.conference_shaped,
      'lambdas': GetLambdaGrid(plan),
      'modes': list(plan.modes),
      'n_accept': plan.n_accept,
      'n_papers': plan.n_papers,
      'regime': plan.regime,
      'seeds': plan.GetSeeds(),
      'source': plan.source,
      'stage_weights': dict(plan.stage_weights),
      'train_fraction': plan.train_fraction,
      'training': {
          'batch_size': plan.train_config.batch_size,
          'epochs': plan.train_config.epochs,
          'hidden_sizes': list(plan.train_config.hidden_sizes),
          'learning_rate': plan.train_config.learning_rate,
          'patience': plan.train_config.patience},
      'weights': [list(pair) for pair in plan.weights]}


def _GetNumberOfWorkers(plan, number_of_seeds):
  """Determines the number of worker processes."""
  maximum = plan.threads or os.cpu_count() or 1
  return max(1, min(maximum, number_of_seeds))


def RunPlan(plan, regime=None):
  """Runs an experiment plan.

  Every seed prepares its data and baseline once and then runs all cells.
  Seeds run in worker processes, a single worker runs inline. Failures of a
  cell are recorded in its run record, the other cells still run.

  Args:
    plan (ExperimentPlan): experiment plan.
    regime (Optional[BiasRegime]): bias regime of a synthetic source.

  Returns:
    SweepResult: sweep result.

  Raises:
    ConfigurationError: if the plan is not valid.
  """
  plan.Validate()

  cells = GetCells(plan)
  seeds = plan.GetSeeds()
  number_of_workers = _GetNumberOfWorkers(plan, len(seeds))

  logging.info(
      f'Running: {len(cells):d} cells on: {len(seeds):d} seeds with: '
      f'{number_of_workers:d} workers.')

  records = []
  if number_of_workers == 1:
    for seed in seeds:
      records.extend(RunSeed(plan, seed, cells, regime=regime))

  else:
    with concurrent.futures.ProcessPoolExecutor(
        max_workers=number_of_workers) as executor:
      futures = [
          executor.submit(RunSeed, plan, seed, cells, regime=regime)
          for seed in seeds]
      for future in futures:
        records.extend(future.result())

  return SweepResult(GetPlanSummary(plan), records)
