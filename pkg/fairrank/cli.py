# -*- coding: utf-8 -*-
"""Command line interface to generate corpora and run experiments."""

import argparse
import logging
import os
import sys

from fairrank import corpus
from fairrank import data_types
from fairrank import definitions
from fairrank import errors
from fairrank import experiments
from fairrank import reader
from fairrank import reports
from fairrank import synthesis
from fairrank.model import rng as rng_module


EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

SEED_ENVIRONMENT_VARIABLE = 'FAIRRANK_SEED'

MODE_ALIASES = {
    'country': definitions.FAIRNESS_MODE_COUNTRY_ONLY,
    'race': definitions.FAIRNESS_MODE_RACE_ONLY}

_AGGREGATE_CONSOLE_COLUMNS = (
    'mode', 'lambda', 'w_race', 'w_country', 'runs', 'errors',
    'macro_gain_race_mean', 'macro_gain_country_mean', 'micro_gain_race_mean',
    'micro_gain_country_mean', 'utility_gain_mean', 'diversity_gain_mean',
    'f_measure_mean')


class ArgumentParser(argparse.ArgumentParser):
  """Argument parser that raises usage errors instead of exiting."""

  def error(self, message):
    """Raises a usage error.

    Args:
      message (str): error message.

    Raises:
      ConfigurationError: always.
    """
    self.print_usage(sys.stderr)
    raise errors.ConfigurationError(f'{self.prog:s}: error: {message:s}')


def _ParseMode(value):
  """Parses a fairness mode or its alias."""
  mode = MODE_ALIASES.get(value, value)
  if mode not in definitions.FAIRNESS_MODES:
    raise argparse.ArgumentTypeError(f'unsupported mode: {value:s}')
  return mode


def _ParseFloatList(value):
  """Parses a comma separated list of real values."""
  try:
    return [float(item) for item in value.split(',') if item.strip()]
  except ValueError:
    raise argparse.ArgumentTypeError(f'invalid list of numbers: {value:s}')


def _ParseModeList(value):
  """Parses a comma separated list of fairness modes."""
  return [_ParseMode(item.strip()) for item in value.split(',') if item.strip()]


def _AddDataArguments(argument_parser):
  """Adds the data and training arguments of the run and sweep commands.

  Args:
    argument_parser (argparse.ArgumentParser): argument parser.
  """
  plan = data_types.ExperimentPlan()

  argument_parser.add_argument(
      '--config', dest='config', metavar='FILE', default=None,
      help='path of a YAML run configuration (default: none).')
  argument_parser.add_argument(
      '--source', dest='source', choices=sorted(definitions.SOURCES),
      default=None, help=f'data source (default: {plan.source:s}).')
  argument_parser.add_argument(
      '--papers', dest='papers_path', metavar='FILE', default=None,
      help='path of papers.csv of the files source (default: none).')
  argument_parser.add_argument(
      '--authors', dest='authors_path', metavar='FILE', default=None,
      help='path of authors.csv of the files source (default: none).')
  argument_parser.add_argument(
      '--regime', dest='regime', metavar='NAME', default=None,
      help=f'synthetic bias regime: fair, moderate or high (default: '
           f'{plan.regime:s}).')
  argument_parser.add_argument(
      '--n', dest='n_papers', metavar='COUNT', type=int, default=None,
      help=f'number of synthetic papers (default: {plan.n_papers:d}).')
  argument_parser.add_argument(
      '--conference-shaped', dest='conference_shaped', action='store_true',
      default=None, help=(
          'generate SIGCHI, DIS and IUI shaped corpora instead of bias '
          'regime corpora (default: false).'))
  argument_parser.add_argument(
      '--n-accept', dest='n_accept', metavar='COUNT', type=int, default=None,
      help='number of papers to select (default: 280 of 530 synthetic, 351 '
           'of 530 real-format papers).')
  argument_parser.add_argument(
      '--train-fraction', dest='train_fraction', metavar='FRACTION',
      type=float, default=None,
      help=f'training split fraction (default: {plan.train_fraction:g}).')
  argument_parser.add_argument(
      '--epochs', dest='epochs', metavar='COUNT', type=int, default=None,
      help=f'maximum number of epochs (default: '
           f'{plan.train_config.epochs:d}).')
  argument_parser.add_argument(
      '--batch-size', dest='batch_size', metavar='COUNT', type=int,
      default=None, help=f'batch size (default: '
                         f'{plan.train_config.batch_size:d}).')
  argument_parser.add_argument(
      '--learning-rate', dest='learning_rate', metavar='RATE', type=float,
      default=None, help=f'Adam learning rate (default: '
                         f'{plan.train_config.learning_rate:g}).')
  argument_parser.add_argument(
      '--patience', dest='patience', metavar='COUNT', type=int, default=None,
      help=f'early stopping patience (default: '
           f'{plan.train_config.patience:d}).')
  argument_parser.add_argument(
      '--seed', dest='seed', metavar='INT', type=int, default=None,
      help=f'base seed, overrides {SEED_ENVIRONMENT_VARIABLE:s} (default: '
           f'{plan.base_seed:d}).')
  argument_parser.add_argument(
      '--out', dest='output_directory', metavar='DIR', default=None,
      help='output directory (default: results).')


def GetArgumentParser():
  """Retrieves the argument parser.

  Returns:
    argparse.ArgumentParser: argument parser.
  """
  argument_parser = ArgumentParser(
      prog='fairrank', description=(
          'Fairness-aware paper selection: generates corpora, trains '
          'fairness regularized selectors and reports sweeps.'))

  argument_parser.add_argument(
      '--debug', dest='debug', action='store_true', default=False,
      help='enable debug output (default: false).')
  argument_parser.add_argument(
      '--threads', dest='threads', metavar='N', type=int, default=None,
      help='maximum number of worker processes (default: machine '
           'parallelism).')

  subparsers = argument_parser.add_subparsers(
      dest='command', metavar='COMMAND', parser_class=ArgumentParser)

  generate_parser = subparsers.add_parser(
      'generate', help='generate a synthetic corpus.')
  generate_parser.add_argument(
      '--regime', dest='regime', metavar='NAME',
      default=definitions.BIAS_LEVEL_HIGH,
      help='bias regime: fair, moderate or high (default: high).')
  generate_parser.add_argument(
      '--n', dest='n_papers', metavar='COUNT', type=int, default=530,
      help=f'number of papers, at least '
           f'{synthesis.MINIMUM_NUMBER_OF_PAPERS:d} (default: 530).')
  generate_parser.add_argument(
      '--seed', dest='seed', metavar='INT', type=int, default=None,
      help=f'seed, overrides {SEED_ENVIRONMENT_VARIABLE:s} (default: 1).')
  generate_parser.add_argument(
      '--out', dest='output_directory', metavar='DIR', default='data',
      help='output directory (default: data).')
  generate_parser.add_argument(
      '--conference-shaped', dest='conference_shaped', action='store_true',
      default=False, help=(
          'generate a SIGCHI, DIS and IUI shaped corpus (default: false).'))

  run_parser = subparsers.add_parser(
      'run', help='train, select and score one fairness setting.')
  _AddDataArguments(run_parser)
  fairness_spec = data_types.FairnessSpec()
  run_parser.add_argument(
      '--mode', dest='mode', metavar='MODE', type=_ParseMode, default=None,
      help=f'fairness mode: race_only (race), country_only (country) or '
           f'combined (default: {fairness_spec.mode:s}).')
  run_parser.add_argument(
      '--lambda', dest='lambda_value', metavar='VALUE', type=float,
      default=None, help=f'fairness strength, lambda >= 0 (default: '
                         f'{fairness_spec.lambda_value:g}).')
  run_parser.add_argument(
      '--w-race', dest='w_race', metavar='VALUE', type=float, default=None,
      help=f'race weight of the combined mode (default: '
           f'{fairness_spec.w_race:g}).')
  run_parser.add_argument(
      '--w-country', dest='w_country', metavar='VALUE', type=float,
      default=None, help=f'country weight of the combined mode (default: '
                         f'{fairness_spec.w_country:g}).')

  sweep_parser = subparsers.add_parser(
      'sweep', help='run the lambda and weight grid over multiple seeds.')
  _AddDataArguments(sweep_parser)
  plan = data_types.ExperimentPlan()
  sweep_parser.add_argument(
      '--lambdas', dest='lambdas', metavar='LIST', type=_ParseFloatList,
      default=None, help=(
          'comma separated lambda grid, 0 is always added (default: '
          f'{",".join(f"{value:g}" for value in plan.lambdas):s}).'))
  sweep_parser.add_argument(
      '--modes', dest='modes', metavar='LIST', type=_ParseModeList,
      default=None, help=(
          f'comma separated fairness modes (default: '
          f'{",".join(plan.modes):s}).'))
  sweep_parser.add_argument(
      '--seeds', dest='seeds', metavar='COUNT', type=int, default=None,
      help=f'number of seeds (default: {plan.seeds:d}).')

  report_parser = subparsers.add_parser(
      'report', help='render the CSV files and charts of a sweep report.')
  report_parser.add_argument(
      'report_path', metavar='REPORT', help='path of report.json.')
  report_parser.add_argument(
      '--out', dest='output_directory', metavar='DIR', default=None,
      help='output directory (default: directory of the report).')

  return argument_parser


def GetEnvironmentSeed():
  """Retrieves the seed override of the environment.

  Returns:
    int: seed or None if not set.

  Raises:
    ConfigurationError: if the value is not an integer.
  """
  value = os.environ.get(SEED_ENVIRONMENT_VARIABLE, None)
  if value is None or not value.strip():
    return None

  try:
    return int(value, 10)
  except ValueError:
    raise errors.ConfigurationError(
        f'{SEED_ENVIRONMENT_VARIABLE:s} must be an integer, got: {value!s}.')


def ReadRunConfig(options):
  """Resolves the run configuration of the run and sweep commands.

  Precedence: built-in defaults, configuration file, FAIRRANK_SEED and
  command line flags.

  Args:
    options (argparse.Namespace): command line options.

  Returns:
    RunConfig: run configuration.

  Raises:
    ConfigurationError: if the configuration is not valid.
    OSError: if the configuration file cannot be read.
  """
  config_reader = reader.YAMLRunConfigFileReader()
  if options.config:
    run_config = config_reader.ReadFile(options.config)
  else:
    run_config = config_reader.ReadDictionary(None)

  plan = run_config.plan

  seed = GetEnvironmentSeed()
  if options.seed is not None:
    seed = options.seed
  if seed is not None:
    plan.base_seed = seed
    plan.train_config.seed = seed

  for name in (
      'authors_path', 'conference_shaped', 'n_accept', 'n_papers',
      'papers_path', 'regime', 'source', 'train_fraction'):
    value = getattr(options, name)
    if value is not None:
      setattr(plan, name, value)

  for name in ('batch_size', 'epochs', 'learning_rate', 'patience'):
    value = getattr(options, name)
    if value is not None:
      setattr(plan.train_config, name, value)

  for name in ('lambdas', 'modes', 'seeds'):
    value = getattr(options, name, None)
    if value is not None:
      setattr(plan, name, value)

  for name in ('lambda_value', 'mode', 'w_country', 'w_race'):
    value = getattr(options, name, None)
    if value is not None:
      setattr(run_config.fairness, name, value)

  if options.threads is not None:
    plan.threads = options.threads
  if options.output_directory is not None:
    run_config.output_directory = options.output_directory

  plan.Validate()
  return run_config


def _GetRegime(regime_name):
  """Retrieves a bias regime by name, alias or bias level.

  Args:
    regime_name (str): name, alias or bias level of the bias regime.

  Returns:
    BiasRegime: bias regime.

  Raises:
    ConfigurationError: if the bias regime is not defined.
  """
  definitions_registry = reader.ReadDefaultBiasRegimes()
  regime = definitions_registry.GetDefinitionByName(regime_name or '')
  if not regime:
    names = ', '.join([
        bias_regime.name
        for bias_regime in definitions_registry.GetDefinitions()])
    raise errors.ConfigurationError(
        f'Unsupported bias regime: {regime_name!s}, expected one of: '
        f'{names:s}.')
  return regime


def _CheckDataFiles(plan):
  """Checks that the data files of a files source exist.

  Args:
    plan (ExperimentPlan): experiment plan.

  Raises:
    FileNotFoundError: if a data file does not exist.
  """
  if plan.source == definitions.SOURCE_FILES:
    for path in (plan.papers_path, plan.authors_path):
      if not os.path.isfile(path):
        raise FileNotFoundError(f'No such file: {path:s}')


def _GetPlanRegime(plan):
  """Retrieves the bias regime a plan needs or None."""
  if plan.source == definitions.SOURCE_SYNTHETIC and not plan.conference_shaped:
    return _GetRegime(plan.regime)
  return None


def GenerateCommand(options):
  """Generates a synthetic corpus.

  Args:
    options (argparse.Namespace): command line options.

  Returns:
    int: exit code.
  """
  seed = GetEnvironmentSeed()
  if options.seed is not None:
    seed = options.seed
  if seed is None:
    seed = 1

  generator_rng = rng_module.Rng(seed, stream=experiments.CORPUS_STREAM)
  if options.conference_shaped:
    papers, authors = synthesis.GenerateConferenceCorpus(generator_rng)
  else:
    if options.n_papers < synthesis.MINIMUM_NUMBER_OF_PAPERS:
      raise errors.ConfigurationError(
          f'--n must be >= {synthesis.MINIMUM_NUMBER_OF_PAPERS:d}, got: '
          f'{options.n_papers:d}.')

    regime = _GetRegime(options.regime)
    papers, authors = synthesis.GenerateSynthetic(
        regime, options.n_papers, generator_rng)

  papers_path, authors_path = corpus.WriteRecords(
      papers, authors, options.output_directory)

  print(f'Wrote: {len(papers):d} papers to: {papers_path:s}')
  print(f'Wrote: {len(authors):d} authors to: {authors_path:s}')
  print('Protected paper shares:')
  for attribute, share in corpus.DemographicShares(papers, authors).items():
    print(f'  {attribute:<8s} {share:8.4f}%')

  return EXIT_SUCCESS


def RunCommand(options):
  """Runs one fairness setting end to end.

  Args:
    options (argparse.Namespace): command line options.

  Returns:
    int: exit code.
  """
  run_config = ReadRunConfig(options)
  plan = run_config.plan
  run_config.fairness.Validate()
  _CheckDataFiles(plan)

  record = experiments.RunSingle(
      plan, run_config.fairness, plan.base_seed, regime=_GetPlanRegime(plan))

  report_path = reports.EmitRunReport(
      record, experiments.GetPlanSummary(plan), run_config.output_directory)

  print(reports.FormatMetricsTable(record))
  print(f'Wrote: {report_path:s}')
  return EXIT_SUCCESS


def SweepCommand(options):
  """Runs the experiment grid and writes the reports.

  Args:
    options (argparse.Namespace): command line options.

  Returns:
    int: exit code.
  """
  run_config = ReadRunConfig(options)
  plan = run_config.plan
  _CheckDataFiles(plan)

  sweep_result = experiments.RunPlan(plan, regime=_GetPlanRegime(plan))
  paths = reports.EmitReports(sweep_result, run_config.output_directory)

  aggregate_table = sweep_result.GetAggregateTable()
  print(reports.FormatTable(
      aggregate_table[list(_AGGREGATE_CONSOLE_COLUMNS)]))
  for path in paths:
    print(f'Wrote: {path:s}')

  number_of_errors = sum(1 for record in sweep_result.records if record.error)
  if number_of_errors:
    logging.warning(f'Number of failed runs: {number_of_errors:d}')

  return EXIT_SUCCESS


def ReportCommand(options):
  """Renders the files of a sweep report.

  Args:
    options (argparse.Namespace): command line options.

  Returns:
    int: exit code.
  """
  if not os.path.isfile(options.report_path):
    raise FileNotFoundError(f'No such file: {options.report_path:s}')

  for path in reports.RerenderReports(
      options.report_path, output_directory=options.output_directory):
    print(f'Wrote: {path:s}')

  return EXIT_SUCCESS


_COMMANDS = {
    'generate': GenerateCommand,
    'report': ReportCommand,
    'run': RunCommand,
    'sweep': SweepCommand}


def Main(arguments=None):
  """The main program function.

  Args:
    arguments (Optional[list[str]]): command line arguments, None for
        sys.argv.

  Returns:
    int: 0 if successful, 1 for a data or runtime failure and 2 for a usage
        or configuration failure.
  """
  argument_parser = GetArgumentParser()

  try:
    options = argument_parser.parse_args(arguments)
  except errors.ConfigurationError as exception:
    print(exception, file=sys.stderr)
    return EXIT_USAGE
  except SystemExit as exception:
    # --help exits with 0.
    return exception.code if isinstance(exception.code, int) else EXIT_USAGE

  if not options.command:
    argument_parser.print_help()
    return EXIT_USAGE

  if options.threads is not None and options.threads < 1:
    print('--threads must be >= 1.', file=sys.stderr)
    return EXIT_USAGE

  if options.debug:
    logging_level = logging.DEBUG
  else:
    logging_level = logging.INFO

  logging.basicConfig(
      level=logging_level, format='[%(levelname)s] %(message)s')

  try:
    return _COMMANDS[options.command](options)

  except errors.ConfigurationError as exception:
    print(f'Configuration error: {exception!s}', file=sys.stderr)
    return EXIT_USAGE

  except errors.ParseError as exception:
    print(f'Unable to parse records: {exception!s}', file=sys.stderr)
    return EXIT_FAILURE

  except (errors.Error, OSError) as exception:
    print(f'Error: {exception!s}', file=sys.stderr)
    return EXIT_FAILURE
