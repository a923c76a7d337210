# -*- coding: utf-8 -*-
"""The bias regime definitions and run configuration reader objects."""

import abc
import os

import yaml

from fairrank import data_types
from fairrank import definitions
from fairrank import errors
from fairrank import registry


DEFAULT_BIAS_REGIMES_PATH = os.path.join(
    os.path.dirname(__file__), 'data', 'bias_regimes.yaml')


class YAMLFileReader(object):
  """YAML file reader interface."""

  def ReadFile(self, *args):
    """Reads a YAML file.

    The last argument is the path of the file, preceding arguments are
    passed to ReadFileObject.

    Returns:
      object: result of ReadFileObject.
    """
    path = args[-1]
    with open(path, 'r', encoding='utf-8') as file_object:
      return self.ReadFileObject(*args[:-1], file_object)

  @abc.abstractmethod
  def ReadFileObject(self, *args):
    """Reads a YAML file-like object.

    Returns:
      object: read values.
    """


class YAMLBiasRegimeDefinitionsFileReader(YAMLFileReader):
  """YAML bias regime definitions file reader."""

  _SUPPORTED_DEFINITION_VALUES = frozenset([
      'aliases', 'description', 'level', 'name', 'penalty', 'shares'])

  _SUPPORTED_SHARES = frozenset([
      definitions.ATTRIBUTE_COUNTRY,
      definitions.ATTRIBUTE_GENDER,
      definitions.ATTRIBUTE_RACE])

  def _GetPercentage(self, name, values, key):
    """Retrieves a percentage value.

    Args:
      name (str): name of the definition.
      values (dict[str, object]): values.
      key (str): key of the value.

    Returns:
      float: percentage.

    Raises:
      ConfigReaderError: if the value is missing or out of range.
    """
    value = values.get(key, None)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
      raise errors.ConfigReaderError(name, f'missing or invalid share: {key:s}')

    if not 0.0 <= value <= 100.0:
      raise errors.ConfigReaderError(
          name, f'share: {key:s} out of range [0, 100]')

    return float(value)

  def _ReadDefinition(self, definition_values):
    """Reads a bias regime definition.

    Args:
      definition_values (dict[str, object]): definition values.

    Returns:
      BiasRegime: bias regime definition.

    Raises:
      ConfigReaderError: if the definitions values are missing or if
          the format is incorrect.
    """
    if not definition_values or not isinstance(definition_values, dict):
      raise errors.ConfigReaderError(None, 'missing definition values')

    name = definition_values.get('name', None)
    if not name:
      raise errors.ConfigReaderError(None, 'missing name')

    unsupported_definition_values = set(definition_values.keys()).difference(
        self._SUPPORTED_DEFINITION_VALUES)
    if unsupported_definition_values:
      values_string = ', '.join(sorted(unsupported_definition_values))
      raise errors.ConfigReaderError(
          name, f'unsupported definition values: {values_string:s}')

    level = definition_values.get('level', None)
    if level not in definitions.BIAS_LEVELS:
      raise errors.ConfigReaderError(name, f'unsupported level: {level!s}')

    shares = definition_values.get('shares', None) or {}
    if not isinstance(shares, dict):
      raise errors.ConfigReaderError(name, 'shares must be a mapping')

    unsupported_shares = set(shares.keys()).difference(self._SUPPORTED_SHARES)
    if unsupported_shares:
      values_string = ', '.join(sorted(unsupported_shares))
      raise errors.ConfigReaderError(
          name, f'unsupported shares: {values_string:s}')

    penalty = definition_values.get('penalty', 0.0)
    if isinstance(penalty, bool) or not isinstance(penalty, (int, float)) or (
        not 0.0 <= penalty < 1.0):
      raise errors.ConfigReaderError(name, 'penalty must be in [0, 1)')

    return data_types.BiasRegime(
        name, level,
        self._GetPercentage(name, shares, definitions.ATTRIBUTE_GENDER),
        self._GetPercentage(name, shares, definitions.ATTRIBUTE_RACE),
        self._GetPercentage(name, shares, definitions.ATTRIBUTE_COUNTRY),
        float(penalty), aliases=definition_values.get('aliases', None),
        description=definition_values.get('description', None))

  def ReadFileObject(self, definitions_registry, file_object):
    """Reads bias regime definitions from a file-like object into a registry.

    Args:
      definitions_registry (BiasRegimeDefinitionsRegistry): bias regime
          definitions registry.
      file_object (file): file-like object to read from.

    Raises:
      FormatError: if the definitions values are missing or if the format is
          incorrect.
    """
    last_definition = None

    try:
      for yaml_definition in yaml.safe_load_all(file_object):
        definition = self._ReadDefinition(yaml_definition)
        definitions_registry.RegisterDefinition(definition)
        last_definition = definition

    except errors.ConfigReaderError as exception:
      name = exception.key or '<NAMELESS>'
      raise errors.FormatError(f'in: {name:s} {exception.message:s}')

    except yaml.YAMLError as exception:
      if last_definition:
        error_location = f'after: {last_definition.name:s}'
      else:
        error_location = 'at start'
      raise errors.FormatError(f'{error_location:s} {exception!s}')


def ReadDefaultBiasRegimes():
  """Reads the bias regime definitions shipped with fairrank.

  Returns:
    BiasRegimeDefinitionsRegistry: bias regime definitions registry.
  """
  definitions_registry = registry.BiasRegimeDefinitionsRegistry()
  definitions_reader = YAMLBiasRegimeDefinitionsFileReader()
  definitions_reader.ReadFile(definitions_registry, DEFAULT_BIAS_REGIMES_PATH)
  return definitions_registry


class YAMLRunConfigFileReader(YAMLFileReader):
  """YAML run configuration file reader."""

  _SECTION_CALLBACKS = {
      'data': '_ReadDataSection',
      'experiment': '_ReadExperimentSection',
      'fairness': '_ReadFairnessSection',
      'model': '_ReadModelSection',
      'output': '_ReadOutputSection',
      'stage_weights': '_ReadStageWeightsSection',
      'synthesis': '_ReadSynthesisSection',
      'training': '_ReadTrainingSection'}

  _SUPPORTED_DATA_VALUES = frozenset([
      'authors_path', 'conference_shaped', 'n_accept', 'n_papers',
      'papers_path', 'regime', 'source', 'train_fraction'])

  _SUPPORTED_EXPERIMENT_VALUES = frozenset([
      'lambdas', 'modes', 'seeds', 'threads', 'weights'])

  _SUPPORTED_FAIRNESS_VALUES = frozenset([
      'lambda', 'mode', 'w_country', 'w_race'])

  _SUPPORTED_MODEL_VALUES = frozenset(['hidden_sizes'])

  _SUPPORTED_OUTPUT_VALUES = frozenset(['directory'])

  _SUPPORTED_STAGE_WEIGHTS_VALUES = frozenset(definitions.CAREER_STAGES)

  _SUPPORTED_SYNTHESIS_VALUES = frozenset([
      'accept_fraction', 'h_index_deviation', 'h_index_means', 'max_authors',
      'score_noise', 'tier_mix'])

  _SUPPORTED_TRAINING_VALUES = frozenset([
      'batch_size', 'epochs', 'learning_rate', 'patience', 'seed'])

  def _CheckSupportedValues(self, section, values, supported_values):
    """Checks that a section only contains supported keys.

    Args:
      section (str): name of the section.
      values (dict[str, object]): section values.
      supported_values (frozenset[str]): supported keys.

    Raises:
      ConfigReaderError: if the section is not a mapping or contains an
          unsupported key.
    """
    if not isinstance(values, dict):
      raise errors.ConfigReaderError(section, 'section must be a mapping')

    unsupported_values = set(values.keys()).difference(supported_values)
    if unsupported_values:
      values_string = ', '.join(sorted(str(key) for key in unsupported_values))
      raise errors.ConfigReaderError(
          section, f'unsupported keys: {values_string:s}')

  def _GetBoolean(self, section, values, key):
    """Retrieves a boolean value.

    Args:
      section (str): name of the section.
      values (dict[str, object]): section values.
      key (str): key of the value.

    Returns:
      bool: value.

    Raises:
      ConfigReaderError: if the value is not a boolean.
    """
    value = values[key]
    if not isinstance(value, bool):
      raise errors.ConfigReaderError(
          f'{section:s}.{key:s}', 'must be a boolean')
    return value

  def _GetFloat(self, section, values, key):
    """Retrieves a real value.

    Args:
      section (str): name of the section.
      values (dict[str, object]): section values.
      key (str): key of the value.

    Returns:
      float: value.

    Raises:
      ConfigReaderError: if the value is not a number.
    """
    value = values[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
      raise errors.ConfigReaderError(f'{section:s}.{key:s}', 'must be a number')
    return float(value)

  def _GetInteger(self, section, values, key, allow_none=False):
    """Retrieves an integer value.

    Args:
      section (str): name of the section.
      values (dict[str, object]): section values.
      key (str): key of the value.
      allow_none (Optional[bool]): True if an empty value is allowed.

    Returns:
      int: value or None.

    Raises:
      ConfigReaderError: if the value is not an integer.
    """
    value = values[key]
    if value is None and allow_none:
      return None

    if isinstance(value, bool) or not isinstance(value, int):
      raise errors.ConfigReaderError(
          f'{section:s}.{key:s}', 'must be an integer')
    return value

  def _GetString(self, section, values, key, allow_none=False):
    """Retrieves a string value.

    Args:
      section (str): name of the section.
      values (dict[str, object]): section values.
      key (str): key of the value.
      allow_none (Optional[bool]): True if an empty value is allowed.

    Returns:
      str: value or None.

    Raises:
      ConfigReaderError: if the value is not a string.
    """
    value = values[key]
    if value is None and allow_none:
      return None

    if not isinstance(value, str):
      raise errors.ConfigReaderError(f'{section:s}.{key:s}', 'must be a string')
    return value

  def _GetTierMapping(self, section, values, key):
    """Retrieves a per tier mapping of real values.

    Args:
      section (str): name of the section.
      values (dict[str, object]): section values.
      key (str): key of the value.

    Returns:
      dict[str, float]: value per tier.

    Raises:
      ConfigReaderError: if the value is not a per tier mapping.
    """
    mapping = values[key]
    name = f'{section:s}.{key:s}'
    self._CheckSupportedValues(name, mapping, frozenset(definitions.TIERS))
    return {tier: self._GetFloat(name, mapping, tier) for tier in mapping}

  def _ReadDataSection(self, run_config, values):
    """Reads the data section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.
    """
    self._CheckSupportedValues('data', values, self._SUPPORTED_DATA_VALUES)

    plan = run_config.plan
    if 'authors_path' in values:
      plan.authors_path = self._GetString(
          'data', values, 'authors_path', allow_none=True)
    if 'conference_shaped' in values:
      plan.conference_shaped = self._GetBoolean(
          'data', values, 'conference_shaped')
    if 'n_accept' in values:
      plan.n_accept = self._GetInteger(
          'data', values, 'n_accept', allow_none=True)
    if 'n_papers' in values:
      plan.n_papers = self._GetInteger('data', values, 'n_papers')
    if 'papers_path' in values:
      plan.papers_path = self._GetString(
          'data', values, 'papers_path', allow_none=True)
    if 'regime' in values:
      plan.regime = self._GetString('data', values, 'regime')
    if 'source' in values:
      plan.source = self._GetString('data', values, 'source')
    if 'train_fraction' in values:
      plan.train_fraction = self._GetFloat('data', values, 'train_fraction')

  def _ReadExperimentSection(self, run_config, values):
    """Reads the experiment section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.

    Raises:
      ConfigReaderError: if a value is not valid.
    """
    self._CheckSupportedValues(
        'experiment', values, self._SUPPORTED_EXPERIMENT_VALUES)

    plan = run_config.plan
    if 'lambdas' in values:
      lambdas = values['lambdas']
      if not isinstance(lambdas, list) or not lambdas:
        raise errors.ConfigReaderError(
            'experiment.lambdas', 'must be a non-empty list')
      plan.lambdas = [
          self._GetFloat('experiment.lambdas', {'value': value}, 'value')
          for value in lambdas]

    if 'modes' in values:
      modes = values['modes']
      if not isinstance(modes, list) or not modes:
        raise errors.ConfigReaderError(
            'experiment.modes', 'must be a non-empty list')
      plan.modes = [
          self._GetString('experiment.modes', {'value': value}, 'value')
          for value in modes]

    if 'seeds' in values:
      plan.seeds = self._GetInteger('experiment', values, 'seeds')

    if 'threads' in values:
      plan.threads = self._GetInteger(
          'experiment', values, 'threads', allow_none=True)

    if 'weights' in values:
      weights = values['weights']
      if not isinstance(weights, list) or not weights:
        raise errors.ConfigReaderError(
            'experiment.weights', 'must be a non-empty list')

      plan.weights = []
      for pair in weights:
        if not isinstance(pair, list) or len(pair) != 2:
          raise errors.ConfigReaderError(
              'experiment.weights', 'entries must be [w_race, w_country]')
        pair_values = {'w_race': pair[0], 'w_country': pair[1]}
        plan.weights.append((
            self._GetFloat('experiment.weights', pair_values, 'w_race'),
            self._GetFloat('experiment.weights', pair_values, 'w_country')))

  def _ReadFairnessSection(self, run_config, values):
    """Reads the fairness section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.
    """
    self._CheckSupportedValues(
        'fairness', values, self._SUPPORTED_FAIRNESS_VALUES)

    fairness = run_config.fairness
    if 'lambda' in values:
      fairness.lambda_value = self._GetFloat('fairness', values, 'lambda')
    if 'mode' in values:
      fairness.mode = self._GetString('fairness', values, 'mode')
    if 'w_country' in values:
      fairness.w_country = self._GetFloat('fairness', values, 'w_country')
    if 'w_race' in values:
      fairness.w_race = self._GetFloat('fairness', values, 'w_race')

  def _ReadModelSection(self, run_config, values):
    """Reads the model section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.

    Raises:
      ConfigReaderError: if a value is not valid.
    """
    self._CheckSupportedValues('model', values, self._SUPPORTED_MODEL_VALUES)

    if 'hidden_sizes' in values:
      hidden_sizes = values['hidden_sizes']
      if not isinstance(hidden_sizes, list) or len(hidden_sizes) != 2:
        raise errors.ConfigReaderError(
            'model.hidden_sizes', 'must be a list of 2 widths')
      run_config.plan.train_config.hidden_sizes = [
          self._GetInteger('model.hidden_sizes', {'value': value}, 'value')
          for value in hidden_sizes]

  def _ReadOutputSection(self, run_config, values):
    """Reads the output section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.
    """
    self._CheckSupportedValues('output', values, self._SUPPORTED_OUTPUT_VALUES)

    if 'directory' in values:
      run_config.output_directory = self._GetString(
          'output', values, 'directory')

  def _ReadStageWeightsSection(self, run_config, values):
    """Reads the stage weights section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.
    """
    self._CheckSupportedValues(
        'stage_weights', values, self._SUPPORTED_STAGE_WEIGHTS_VALUES)

    for stage in values:
      run_config.plan.stage_weights[stage] = self._GetFloat(
          'stage_weights', values, stage)

  def _ReadSynthesisSection(self, run_config, values):
    """Reads the synthesis section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.
    """
    self._CheckSupportedValues(
        'synthesis', values, self._SUPPORTED_SYNTHESIS_VALUES)

    synthesis = run_config.plan.synthesis
    if 'accept_fraction' in values:
      synthesis.accept_fraction = self._GetFloat(
          'synthesis', values, 'accept_fraction')
    if 'h_index_deviation' in values:
      synthesis.h_index_deviation = self._GetFloat(
          'synthesis', values, 'h_index_deviation')
    if 'h_index_means' in values:
      synthesis.h_index_means.update(
          self._GetTierMapping('synthesis', values, 'h_index_means'))
    if 'max_authors' in values:
      synthesis.max_authors = self._GetInteger(
          'synthesis', values, 'max_authors')
    if 'score_noise' in values:
      synthesis.score_noise = self._GetFloat(
          'synthesis', values, 'score_noise')
    if 'tier_mix' in values:
      synthesis.tier_mix.update(
          self._GetTierMapping('synthesis', values, 'tier_mix'))

  def _ReadTrainingSection(self, run_config, values):
    """Reads the training section.

    Args:
      run_config (RunConfig): run configuration.
      values (dict[str, object]): section values.
    """
    self._CheckSupportedValues(
        'training', values, self._SUPPORTED_TRAINING_VALUES)

    train_config = run_config.plan.train_config
    if 'batch_size' in values:
      train_config.batch_size = self._GetInteger(
          'training', values, 'batch_size')
    if 'epochs' in values:
      train_config.epochs = self._GetInteger('training', values, 'epochs')
    if 'learning_rate' in values:
      train_config.learning_rate = self._GetFloat(
          'training', values, 'learning_rate')
    if 'patience' in values:
      train_config.patience = self._GetInteger('training', values, 'patience')
    if 'seed' in values:
      seed = self._GetInteger('training', values, 'seed')
      train_config.seed = seed
      run_config.plan.base_seed = seed

  def ReadDictionary(self, config_values):
    """Reads a run configuration from a dictionary.

    Args:
      config_values (dict[str, object]): configuration values, None or an
          empty dictionary represents the default configuration.

    Returns:
      RunConfig: run configuration.

    Raises:
      ConfigurationError: if the configuration is not valid.
    """
    run_config = data_types.RunConfig()

    try:
      if config_values is None:
        config_values = {}
      self._CheckSupportedValues(
          '<root>', config_values, frozenset(self._SECTION_CALLBACKS.keys()))

      for section, section_values in sorted(config_values.items()):
        callback = getattr(self, self._SECTION_CALLBACKS[section])
        if section_values is None:
          section_values = {}
        callback(run_config, section_values)

    except errors.ConfigReaderError as exception:
      raise errors.ConfigurationError(
          f'Invalid configuration in: {exception.key!s} {exception.message:s}')

    return run_config

  def ReadFileObject(self, file_object):
    """Reads a run configuration from a file-like object.

    Args:
      file_object (file): file-like object to read from.

    Returns:
      RunConfig: run configuration.

    Raises:
      ConfigurationError: if the configuration is not valid.
    """
    try:
      config_values = yaml.safe_load(file_object)
    except yaml.YAMLError as exception:
      raise errors.ConfigurationError(
          f'Unable to parse configuration with error: {exception!s}')

    return self.ReadDictionary(config_values)
