# -*- coding: utf-8 -*-
"""Report files and tables of runs and sweeps."""

import io
import json
import math
import os

import matplotlib
matplotlib.use('Agg')

from matplotlib import figure as matplotlib_figure  # pylint: disable=wrong-import-position

from fairrank import definitions  # pylint: disable=wrong-import-position
from fairrank import errors  # pylint: disable=wrong-import-position
from fairrank import experiments  # pylint: disable=wrong-import-position
from fairrank import file_io  # pylint: disable=wrong-import-position


AGGREGATE_FILENAME = 'aggregate.csv'
REPORT_FILENAME = 'report.json'
SWEEP_FILENAME = 'sweep.csv'

FLOAT_FORMAT = '%.4f'

REPORT_KIND_RUN = 'run'
REPORT_KIND_SWEEP = 'sweep'

_METRIC_LABELS = {
    'macro_gain_country': 'Macro gain (country)',
    'macro_gain_race': 'Macro gain (race)',
    'micro_gain_country': 'Micro gain (country)',
    'micro_gain_race': 'Micro gain (race)',
    'utility_gain': 'Utility gain'}

# Settings that make the SVG output identical between runs.
_SVG_RC_PARAMS = {'svg.hashsalt': 'fairrank', 'svg.fonttype': 'none'}
_SVG_METADATA = {'Date': None}


def _ToJSONValue(value):
  """Converts a value to a JSON compatible value, NaN becomes None.

  Args:
    value (object): value.

  Returns:
    object: JSON compatible value.
  """
  if isinstance(value, dict):
    return {str(key): _ToJSONValue(item) for key, item in value.items()}

  if isinstance(value, (list, tuple)):
    return [_ToJSONValue(item) for item in value]

  if isinstance(value, bool) or value is None or isinstance(value, str):
    return value

  if isinstance(value, int):
    return int(value)

  if hasattr(value, 'item'):
    value = value.item()

  if isinstance(value, float) and not math.isfinite(value):
    return None

  return value


def FormatJSON(values):
  """Formats report values as JSON.

  Args:
    values (dict[str, object]): report values.

  Returns:
    str: JSON with sorted keys and full float precision.
  """
  return json.dumps(
      _ToJSONValue(values), allow_nan=False, indent=2, sort_keys=True) + '\n'


def FormatCSV(table):
  """Formats a table as CSV with 4 decimals.

  Args:
    table (pandas.DataFrame): table.

  Returns:
    str: CSV data.
  """
  output = io.StringIO()
  table.to_csv(
      output, float_format=FLOAT_FORMAT, index=False, lineterminator='\n')
  return output.getvalue()


def FormatTable(table):
  """Formats a table for the console with 4 decimals.

  Args:
    table (pandas.DataFrame): table.

  Returns:
    str: text table.
  """
  return table.to_string(
      index=False, float_format=lambda value: f'{value:.4f}', na_rep='n/a')


def GetChartMetrics(mode):
  """Retrieves the metrics plotted for a fairness mode.

  Args:
    mode (str): fairness mode.

  Returns:
    list[str]: metric column names.
  """
  attributes = definitions.FAIRNESS_MODE_ATTRIBUTES.get(
      mode, definitions.PROTECTED_ATTRIBUTES)

  metric_names = [f'macro_gain_{attribute:s}' for attribute in attributes]
  metric_names.extend(f'micro_gain_{attribute:s}' for attribute in attributes)
  metric_names.append('utility_gain')
  return metric_names


def GetChartName(mode, w_race, w_country):
  """Retrieves the file name of a chart.

  Args:
    mode (str): fairness mode.
    w_race (float): race weight.
    w_country (float): country weight.

  Returns:
    str: file name.
  """
  if mode == definitions.FAIRNESS_MODE_COMBINED:
    return f'{mode:s}_wr{w_race:g}_wc{w_country:g}.svg'
  return f'{mode:s}.svg'


def RenderChart(cell_table, title, metric_names):
  """Renders gains against lambda as an SVG line chart.

  Every metric is a line with a band of one standard deviation, the line
  element carries the metric name as its identifier.

  Args:
    cell_table (pandas.DataFrame): aggregate rows of one chart sorted by
        lambda.
    title (str): chart title.
    metric_names (list[str]): metric column names.

  Returns:
    bytes: SVG data.
  """
  lambdas = cell_table['lambda'].astype(float).to_numpy()

  with matplotlib.rc_context(_SVG_RC_PARAMS):
    chart = matplotlib_figure.Figure(figsize=(6.4, 4.0))
    axes = chart.add_subplot(1, 1, 1)

    for metric_name in metric_names:
      means = cell_table[f'{metric_name:s}_mean'].astype(float).to_numpy()
      deviations = cell_table[f'{metric_name:s}_std'].astype(
          float).fillna(0.0).to_numpy()

      axes.fill_between(
          lambdas, means - deviations, means + deviations, alpha=0.2,
          gid=f'{metric_name:s}_band')
      axes.plot(
          lambdas, means, marker='o', label=_METRIC_LABELS[metric_name],
          gid=metric_name)

    axes.axhline(0.0, color='grey', linewidth=0.5)
    axes.set_title(title)
    axes.set_xlabel('lambda')
    axes.set_ylabel('gain (%)')
    axes.legend(loc='best', fontsize='small')

    output = io.BytesIO()
    chart.savefig(output, format='svg', metadata=_SVG_METADATA)

  return output.getvalue()


def _GetDatasetName(plan_summary):
  """Retrieves a descriptive dataset name of a plan summary."""
  if plan_summary.get('source') == definitions.SOURCE_FILES:
    return 'conference data'
  if plan_summary.get('conference_shaped'):
    return 'conference shaped synthetic data'
  return f'synthetic {plan_summary.get("regime")!s} bias data'


def _WriteSweepFiles(plan_summary, record_values, output_directory):
  """Writes the CSV files and charts of a sweep.

  Args:
    plan_summary (dict[str, object]): summary of the plan.
    record_values (list[dict[str, object]]): run record values.
    output_directory (str): path of the output directory.

  Returns:
    list[str]: paths of the written files.
  """
  sweep_table = experiments.SweepTable(record_values)
  aggregate_table = experiments.AggregateTable(sweep_table)

  paths = []
  for filename, table in (
      (SWEEP_FILENAME, sweep_table), (AGGREGATE_FILENAME, aggregate_table)):
    path = os.path.join(output_directory, filename)
    file_io.WriteFileAtomically(path, FormatCSV(table))
    paths.append(path)

  dataset_name = _GetDatasetName(plan_summary)
  chart_keys = []
  for row in aggregate_table.itertuples(index=False):
    key = (row.mode, row.w_race, row.w_country)
    if key not in chart_keys:
      chart_keys.append(key)

  for mode, w_race, w_country in chart_keys:
    cell_table = aggregate_table[
        (aggregate_table['mode'] == mode) &
        (aggregate_table['w_race'] == w_race) &
        (aggregate_table['w_country'] == w_country)].sort_values(
            by='lambda', kind='mergesort')

    title = f'{mode:s} on {dataset_name:s}'
    if mode == definitions.FAIRNESS_MODE_COMBINED:
      title = f'{title:s} (w_race {w_race:g}, w_country {w_country:g})'

    path = os.path.join(
        output_directory, GetChartName(mode, w_race, w_country))
    file_io.WriteFileAtomically(
        path, RenderChart(cell_table, title, GetChartMetrics(mode)))
    paths.append(path)

  return paths


def EmitReports(sweep_result, output_directory):
  """Writes the report files of a sweep.

  The files are sweep.csv with one row per cell and seed, aggregate.csv with
  the mean and standard deviation per cell, report.json with the full
  result and one chart per mode and weight pair.

  Args:
    sweep_result (SweepResult): sweep result.
    output_directory (str): path of the output directory.

  Returns:
    list[str]: paths of the written files.

  Raises:
    OSError: if the output directory is not writable, checked before any
        file is written.
  """
  file_io.CheckWritableDirectory(output_directory)

  record_values = [record.CopyToDict() for record in sweep_result.records]
  report_values = {
      'kind': REPORT_KIND_SWEEP,
      'plan': sweep_result.plan,
      'records': record_values}

  # report.json is read back so that the CSV files are rendered from the
  # same values as a later re-render.
  report_data = FormatJSON(report_values)
  paths = _WriteSweepFiles(
      sweep_result.plan, json.loads(report_data)['records'], output_directory)

  report_path = os.path.join(output_directory, REPORT_FILENAME)
  file_io.WriteFileAtomically(report_path, report_data)
  paths.append(report_path)
  return paths


def EmitRunReport(record, plan_summary, output_directory):
  """Writes the report file of a single run.

  Args:
    record (RunRecord): run record.
    plan_summary (dict[str, object]): summary of the plan.
    output_directory (str): path of the output directory.

  Returns:
    str: path of report.json.

  Raises:
    OSError: if the output directory is not writable.
  """
  file_io.CheckWritableDirectory(output_directory)

  report_path = os.path.join(output_directory, REPORT_FILENAME)
  file_io.WriteFileAtomically(report_path, FormatJSON({
      'kind': REPORT_KIND_RUN,
      'plan': plan_summary,
      'record': record.CopyToDict()}))
  return report_path


def RerenderReports(report_path, output_directory=None):
  """Renders the CSV files and charts of a sweep from its report.json.

  Args:
    report_path (str): path of report.json.
    output_directory (Optional[str]): path of the output directory, None
        for the directory of report.json.

  Returns:
    list[str]: paths of the written files.

  Raises:
    FormatError: if the report is not a sweep report.
    OSError: if the report cannot be read or the files cannot be written.
  """
  with open(report_path, 'r', encoding='utf-8') as file_object:
    try:
      report_values = json.load(file_object)
    except json.JSONDecodeError as exception:
      raise errors.FormatError(
          f'Unable to parse report: {report_path:s} with error: '
          f'{exception!s}')

  if not isinstance(report_values, dict) or report_values.get(
      'kind') != REPORT_KIND_SWEEP or 'records' not in report_values:
    raise errors.FormatError(f'Not a sweep report: {report_path:s}')

  if output_directory is None:
    output_directory = os.path.dirname(os.path.abspath(report_path))

  file_io.CheckWritableDirectory(output_directory)
  return _WriteSweepFiles(
      report_values.get('plan', {}), report_values['records'],
      output_directory)


def FormatMetricsTable(record):
  """Formats the metrics of a single run for the console.

  Args:
    record (RunRecord): run record.

  Returns:
    str: text table.
  """
  report = record.metrics
  lines = [
      f'mode: {record.fairness.mode:s} lambda: '
      f'{record.fairness.lambda_value:.4f} seed: {record.seed:d} selected: '
      f'{record.n_accept:d}']

  rows = []
  for attribute in definitions.PROTECTED_ATTRIBUTES:
    rows.append((f'macro_gain.{attribute:s}', report.macro_gain[attribute]))
    rows.append((f'micro_gain.{attribute:s}', report.micro_gain[attribute]))
  rows.extend([
      ('utility_gain', report.utility_gain),
      ('diversity_gain', report.diversity_gain),
      ('f_measure', report.f_measure)])
  for category, share in report.distribution.items():
    rows.append((f'{report.distribution_axis:s}.{category:s}', share))

  width = max(len(name) for name, _ in rows)
  for name, value in rows:
    if math.isnan(value):
      text = 'undefined'
    else:
      text = f'{value:.4f}'
    lines.append(f'{name:<{width}s}  {text:>10s}')

  return '\n'.join(lines)
