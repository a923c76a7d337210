# -*- coding: utf-8 -*-
"""Record and configuration value objects."""

import copy

from typing import List, Optional, Union  # pylint: disable=unused-import

import numpy

from fairrank import definitions
from fairrank import errors


class AuthorRecord(object):
  """Author record.

  Attributes:
    author_id (str): identifier.
    career_stage (str): career stage.
    country_class (str): developed or underdeveloped.
    gender (int): 0 for male, 1 for female.
    h_index (float): h-index.
    race (str): race.
  """

  def __init__(
      self, author_id: 'str', gender: 'int', race: 'str',
      country_class: 'str', career_stage: 'str',
      h_index: 'float') -> 'None':
    """Initializes an author record.

    Args:
      author_id (str): identifier.
      gender (int): 0 for male, 1 for female.
      race (str): race.
      country_class (str): developed or underdeveloped.
      career_stage (str): career stage.
      h_index (float): h-index.
    """
    super(AuthorRecord, self).__init__()
    self.author_id: 'str' = author_id
    self.career_stage: 'str' = career_stage
    self.country_class: 'str' = country_class
    self.gender: 'int' = gender
    self.h_index: 'float' = h_index
    self.race: 'str' = race

  def IsProtected(self, attribute: 'str') -> 'bool':
    """Determines if the author belongs to the protected group.

    Args:
      attribute (str): gender, race or country.

    Returns:
      bool: True if the author is protected on the attribute.

    Raises:
      ValueError: if the attribute is not supported.
    """
    if attribute == definitions.ATTRIBUTE_RACE:
      return self.race in definitions.PROTECTED_RACES

    if attribute == definitions.ATTRIBUTE_COUNTRY:
      return self.country_class in definitions.PROTECTED_COUNTRY_CLASSES

    if attribute == definitions.ATTRIBUTE_GENDER:
      return self.gender == definitions.GENDER_FEMALE

    raise ValueError(f'Unsupported attribute: {attribute!s}')


class PaperRecord(object):
  """Paper record.

  Attributes:
    accepted (int): 1 if accepted, 0 otherwise.
    author_ids (list[str]): ordered author identifiers.
    conference (int): conference label, 1 = IUI, 2 = DIS, 3 = SIGCHI.
    paper_id (str): identifier.
    tier (str): quality tier of synthetic papers or None.
    title (str): title.
  """

  def __init__(
      self, paper_id: 'str', title: 'str', author_ids: 'List[str]',
      conference: 'int', accepted: 'int',
      tier: 'Optional[str]' = None) -> 'None':
    """Initializes a paper record.

    Args:
      paper_id (str): identifier.
      title (str): title.
      author_ids (list[str]): ordered author identifiers.
      conference (int): conference label.
      accepted (int): 1 if accepted, 0 otherwise.
      tier (Optional[str]): quality tier of synthetic papers.
    """
    super(PaperRecord, self).__init__()
    self.accepted: 'int' = accepted
    self.author_ids: 'List[str]' = list(author_ids)
    self.conference: 'int' = conference
    self.paper_id: 'str' = paper_id
    self.tier: 'Union[str, None]' = tier
    self.title: 'str' = title


class BiasRegime(object):
  """Synthetic bias regime definition.

  Attributes:
    aliases (list[str]): aliases.
    country_share (float): protected country paper share in percent.
    description (str): description.
    gender_share (float): female paper share in percent.
    level (str): fair, moderate or high.
    name (str): name.
    penalty (float): fraction by which protected papers are penalized.
    race_share (float): protected race paper share in percent.
  """

  def __init__(
      self, name: 'str', level: 'str', gender_share: 'float',
      race_share: 'float', country_share: 'float', penalty: 'float',
      aliases: 'Optional[List[str]]' = None,
      description: 'Optional[str]' = None) -> 'None':
    """Initializes a bias regime.

    Args:
      name (str): name.
      level (str): fair, moderate or high.
      gender_share (float): female paper share in percent.
      race_share (float): protected race paper share in percent.
      country_share (float): protected country paper share in percent.
      penalty (float): fraction by which protected papers are penalized.
      aliases (Optional[list[str]]): aliases.
      description (Optional[str]): description.
    """
    super(BiasRegime, self).__init__()
    self.aliases: 'List[str]' = aliases or []
    self.country_share: 'float' = country_share
    self.description: 'Union[str, None]' = description
    self.gender_share: 'float' = gender_share
    self.level: 'str' = level
    self.name: 'str' = name
    self.penalty: 'float' = penalty
    self.race_share: 'float' = race_share

  def GetShare(self, attribute: 'str') -> 'float':
    """Retrieves the target protected share of an attribute.

    Args:
      attribute (str): gender, race or country.

    Returns:
      float: target share in percent.
    """
    return {
        definitions.ATTRIBUTE_COUNTRY: self.country_share,
        definitions.ATTRIBUTE_GENDER: self.gender_share,
        definitions.ATTRIBUTE_RACE: self.race_share}[attribute]


class FairnessSpec(object):
  """Fairness regularization settings.

  Attributes:
    lambda_value (float): fairness regularization strength.
    mode (str): race_only, country_only or combined.
    w_country (float): country weight of the combined loss.
    w_race (float): race weight of the combined loss.
  """

  def __init__(
      self, mode: 'str' = definitions.FAIRNESS_MODE_RACE_ONLY,
      lambda_value: 'float' = 0.0, w_race: 'float' = 0.32,
      w_country: 'float' = 0.68) -> 'None':
    """Initializes fairness settings.

    Args:
      mode (Optional[str]): race_only, country_only or combined.
      lambda_value (Optional[float]): fairness regularization strength.
      w_race (Optional[float]): race weight of the combined loss.
      w_country (Optional[float]): country weight of the combined loss.
    """
    super(FairnessSpec, self).__init__()
    self.lambda_value: 'float' = lambda_value
    self.mode: 'str' = mode
    self.w_country: 'float' = w_country
    self.w_race: 'float' = w_race

  @property
  def attributes(self) -> 'tuple':
    """tuple[str]: protected attributes constrained by the mode."""
    return definitions.FAIRNESS_MODE_ATTRIBUTES.get(self.mode, ())

  def Validate(self) -> 'None':
    """Validates the settings.

    Raises:
      ConfigurationError: if a setting is not valid.
    """
    if self.mode not in definitions.FAIRNESS_MODES:
      raise errors.ConfigurationError(
          f'Unsupported fairness mode: {self.mode!s}.')

    for name, value in (
        ('lambda', self.lambda_value), ('w_race', self.w_race),
        ('w_country', self.w_country)):
      if value is None or not numpy.isfinite(value) or value < 0.0:
        raise errors.ConfigurationError(
            f'Fairness setting: {name:s} must be >= 0, got: {value!s}.')


class GroupMasks(object):
  """Protected group membership per row.

  Attributes:
    protected_country (numpy.ndarray): boolean country group membership.
    protected_race (numpy.ndarray): boolean race group membership.
  """

  def __init__(self, protected_race, protected_country):
    """Initializes group masks.

    Args:
      protected_race (numpy.ndarray): boolean race group membership.
      protected_country (numpy.ndarray): boolean country group membership.

    Raises:
      ShapeError: if the masks differ in length.
    """
    protected_race = numpy.asarray(protected_race, dtype=bool)
    protected_country = numpy.asarray(protected_country, dtype=bool)
    if protected_race.shape != protected_country.shape:
      raise errors.ShapeError('Group masks differ in length.')

    super(GroupMasks, self).__init__()
    self.protected_country = protected_country
    self.protected_race = protected_race

  def GetMask(self, attribute):
    """Retrieves the mask of an attribute.

    Args:
      attribute (str): race or country.

    Returns:
      numpy.ndarray: boolean group membership.
    """
    if attribute == definitions.ATTRIBUTE_RACE:
      return self.protected_race
    if attribute == definitions.ATTRIBUTE_COUNTRY:
      return self.protected_country

    raise ValueError(f'Unsupported attribute: {attribute!s}')

  def Subset(self, indices):
    """Retrieves the masks of a subset of rows.

    Args:
      indices (numpy.ndarray): row indices.

    Returns:
      GroupMasks: masks of the rows.
    """
    return GroupMasks(
        self.protected_race[indices], self.protected_country[indices])


class FeatureColumn(object):
  """Feature column descriptor.

  Attributes:
    kind (str): one-hot, share or min-max.
    maximum (float): maximum of the unscaled values of a min-max column.
    minimum (float): minimum of the unscaled values of a min-max column.
    name (str): name.
  """

  def __init__(self, name, kind, minimum=None, maximum=None):
    """Initializes a feature column descriptor.

    Args:
      name (str): name.
      kind (str): one-hot, share or min-max.
      minimum (Optional[float]): minimum of the unscaled values.
      maximum (Optional[float]): maximum of the unscaled values.
    """
    super(FeatureColumn, self).__init__()
    self.kind = kind
    self.maximum = maximum
    self.minimum = minimum
    self.name = name


class EncodedDataset(object):
  """Encoded dataset.

  Attributes:
    feature_schema (list[FeatureColumn]): ordered column descriptors.
    features (numpy.ndarray): float64 feature matrix, one row per paper.
    labels (numpy.ndarray): acceptance labels in {0, 1}.
    masks (GroupMasks): protected group membership per row.
    paper_ids (list[str]): paper identifier per row.
    train_idx (numpy.ndarray): training row indices or None.
    valid_idx (numpy.ndarray): validation row indices or None.
    warnings (list[str]): warnings recorded while encoding or splitting.
  """

  def __init__(self, features, labels, masks, paper_ids, feature_schema):
    """Initializes an encoded dataset.

    Args:
      features (numpy.ndarray): feature matrix.
      labels (numpy.ndarray): acceptance labels.
      masks (GroupMasks): protected group membership per row.
      paper_ids (list[str]): paper identifier per row.
      feature_schema (list[FeatureColumn]): ordered column descriptors.
    """
    super(EncodedDataset, self).__init__()
    self.feature_schema = feature_schema
    self.features = features
    self.labels = labels
    self.masks = masks
    self.paper_ids = paper_ids
    self.train_idx = None
    self.valid_idx = None
    self.warnings = []

  @property
  def number_of_rows(self):
    """int: number of rows."""
    return self.features.shape[0]

  def CopyWithSplit(self, train_idx, valid_idx):
    """Copies the dataset with split indices set.

    Args:
      train_idx (numpy.ndarray): training row indices.
      valid_idx (numpy.ndarray): validation row indices.

    Returns:
      EncodedDataset: shallow copy with the split indices set.
    """
    dataset = copy.copy(self)
    dataset.train_idx = train_idx
    dataset.valid_idx = valid_idx
    dataset.warnings = list(self.warnings)
    return dataset


class TrainConfig(object):
  """Training settings.

  Attributes:
    batch_size (int): mini-batch size.
    epochs (int): maximum number of epochs.
    fairness (FairnessSpec): fairness settings or None for a prediction loss
        only run.
    hidden_sizes (list[int]): widths of the two hidden layers.
    learning_rate (float): Adam learning rate.
    patience (int): number of epochs without validation improvement before
        stopping.
    seed (int): seed of the run.
  """

  def __init__(
      self, epochs=50, batch_size=32, learning_rate=0.001, patience=10,
      seed=1, fairness=None, hidden_sizes=None):
    """Initializes training settings.

    Args:
      epochs (Optional[int]): maximum number of epochs.
      batch_size (Optional[int]): mini-batch size.
      learning_rate (Optional[float]): Adam learning rate.
      patience (Optional[int]): early stopping patience.
      seed (Optional[int]): seed of the run.
      fairness (Optional[FairnessSpec]): fairness settings.
      hidden_sizes (Optional[list[int]]): widths of the two hidden layers.
    """
    super(TrainConfig, self).__init__()
    self.batch_size = batch_size
    self.epochs = epochs
    self.fairness = fairness
    self.hidden_sizes = list(hidden_sizes or [64, 32])
    self.learning_rate = learning_rate
    self.patience = patience
    self.seed = seed

  def Validate(self):
    """Validates the settings.

    Raises:
      ConfigurationError: if a setting is not valid.
    """
    for name, value, minimum in (
        ('epochs', self.epochs, 1), ('batch_size', self.batch_size, 2),
        ('patience', self.patience, 1)):
      if not isinstance(value, int) or isinstance(value, bool) or (
          value < minimum):
        raise errors.ConfigurationError(
            f'Training setting: {name:s} must be an integer >= {minimum:d}, '
            f'got: {value!s}.')

    if (self.learning_rate is None or not numpy.isfinite(self.learning_rate)
        or self.learning_rate <= 0.0):
      raise errors.ConfigurationError(
          f'Training setting: learning_rate must be > 0, got: '
          f'{self.learning_rate!s}.')

    if len(self.hidden_sizes) != 2:
      raise errors.ConfigurationError(
          f'Model setting: hidden_sizes must contain 2 widths, got: '
          f'{self.hidden_sizes!s}.')

    if self.fairness:
      self.fairness.Validate()


class EpochRecord(object):
  """Losses of one training epoch.

  Attributes:
    train_fairness_loss (float): mean fairness loss over the batches.
    train_prediction_loss (float): mean prediction loss over the batches.
    train_total_loss (float): mean total loss over the batches.
    validation_total_loss (float): total loss on the validation split.
  """

  def __init__(
      self, train_prediction_loss, train_fairness_loss, train_total_loss,
      validation_total_loss):
    """Initializes an epoch record.

    Args:
      train_prediction_loss (float): mean prediction loss over the batches.
      train_fairness_loss (float): mean fairness loss over the batches.
      train_total_loss (float): mean total loss over the batches.
      validation_total_loss (float): total loss on the validation split.
    """
    super(EpochRecord, self).__init__()
    self.train_fairness_loss = train_fairness_loss
    self.train_prediction_loss = train_prediction_loss
    self.train_total_loss = train_total_loss
    self.validation_total_loss = validation_total_loss


class TrainTrace(object):
  """Training trace.

  Attributes:
    best_epoch (int): 1-based epoch of the restored parameters.
    empty_group_batches (int): number of batches in which the fairness term
        was skipped because a group was empty.
    epochs (list[EpochRecord]): per epoch losses.
    initial_prediction_loss (float): prediction loss on the training split
        before the first update.
    stopped_epoch (int): number of epochs run.
  """

  def __init__(self):
    """Initializes a training trace."""
    super(TrainTrace, self).__init__()
    self.best_epoch = 0
    self.empty_group_batches = 0
    self.epochs = []
    self.initial_prediction_loss = None
    self.stopped_epoch = 0

  @property
  def best_validation_loss(self):
    """float: minimum validation total loss or None if no epoch ran."""
    if not self.epochs:
      return None
    return min(record.validation_total_loss for record in self.epochs)

  def IsIdentical(self, other):
    """Determines if two traces are identical.

    Args:
      other (TrainTrace): trace to compare with.

    Returns:
      bool: True if all recorded values are identical.
    """
    if (self.stopped_epoch, self.best_epoch, self.empty_group_batches,
        self.initial_prediction_loss) != (
            other.stopped_epoch, other.best_epoch,
            other.empty_group_batches, other.initial_prediction_loss):
      return False

    return [vars(record) for record in self.epochs] == [
        vars(record) for record in other.epochs]


class SelectionResult(object):
  """Selection result.

  Attributes:
    n_accepted (int): number of selected papers.
    n_total (int): number of candidate papers.
    parity (dict[str, dict[str, float]]): per attribute selected protected
        share and selection rate difference between the protected and
        non-protected group.
    probabilities (dict[str, float]): predicted probability per paper.
    selected_ids (list[str]): selected paper identifiers, highest
        probability first.
    threshold (float): lowest selected probability.
  """

  def __init__(
      self, selected_ids, threshold, n_accepted, n_total, probabilities):
    """Initializes a selection result.

    Args:
      selected_ids (list[str]): selected paper identifiers.
      threshold (float): lowest selected probability.
      n_accepted (int): number of selected papers.
      n_total (int): number of candidate papers.
      probabilities (dict[str, float]): predicted probability per paper.
    """
    super(SelectionResult, self).__init__()
    self.n_accepted = n_accepted
    self.n_total = n_total
    self.parity = {}
    self.probabilities = probabilities
    self.selected_ids = selected_ids
    self.threshold = threshold


class MetricsReport(object):
  """Evaluation metrics of a selection against a baseline.

  Gains are percentages; an undefined gain is NaN and named in undefined.

  Attributes:
    distribution (dict[str, float]): percent share per conference or tier.
    distribution_axis (str): conference or tier.
    diversity_gain (float): diversity gain.
    f_measure (float): F-measure.
    macro_gain (dict[str, float]): macro gain per attribute.
    micro_gain (dict[str, float]): micro gain per attribute.
    n_features (int): number of attributes averaged by the diversity gain.
    undefined (dict[str, str]): reason per undefined metric name.
    utility_gain (float): utility gain.
  """

  def __init__(self):
    """Initializes a metrics report."""
    super(MetricsReport, self).__init__()
    self.distribution = {}
    self.distribution_axis = None
    self.diversity_gain = None
    self.f_measure = None
    self.macro_gain = {}
    self.micro_gain = {}
    self.n_features = 0
    self.undefined = {}
    self.utility_gain = None

  def CopyToDict(self):
    """Copies the report to a dictionary.

    Returns:
      dict[str, object]: report values.
    """
    return {
        'distribution': dict(self.distribution),
        'distribution_axis': self.distribution_axis,
        'diversity_gain': self.diversity_gain,
        'f_measure': self.f_measure,
        'macro_gain': dict(self.macro_gain),
        'micro_gain': dict(self.micro_gain),
        'n_features': self.n_features,
        'undefined': dict(self.undefined),
        'utility_gain': self.utility_gain}


class SynthesisParameters(object):
  """Synthetic corpus generator parameters.

  Attributes:
    accept_fraction (float): fraction of papers labeled accepted.
    h_index_deviation (float): h-index standard deviation as a fraction of
        the tier mean.
    h_index_means (dict[str, float]): mean author h-index per tier.
    max_authors (int): maximum number of authors per paper.
    score_noise (float): standard deviation of the multiplicative log-normal
        noise of the quality score.
    tier_mix (dict[str, float]): fraction of papers per tier.
  """

  def __init__(self):
    """Initializes synthetic corpus generator parameters."""
    super(SynthesisParameters, self).__init__()
    self.accept_fraction = definitions.SYNTHETIC_ACCEPT_FRACTION
    self.h_index_deviation = 0.4
    self.h_index_means = {
        definitions.TIER_LOW: 5.0,
        definitions.TIER_MID: 12.0,
        definitions.TIER_TOP: 25.0}
    self.max_authors = 4
    self.score_noise = 0.15
    self.tier_mix = {
        definitions.TIER_LOW: 0.15,
        definitions.TIER_MID: 0.25,
        definitions.TIER_TOP: 0.60}

  def Validate(self):
    """Validates the parameters.

    Raises:
      ConfigurationError: if a parameter is not valid.
    """
    if set(self.tier_mix.keys()) != set(definitions.TIERS) or any(
        value < 0.0 for value in self.tier_mix.values()) or abs(
            sum(self.tier_mix.values()) - 1.0) > 1e-9:
      raise errors.ConfigurationError(
          'Synthesis setting: tier_mix must define non-negative top, mid and '
          'low fractions that sum to 1.')

    if set(self.h_index_means.keys()) != set(definitions.TIERS) or any(
        value <= 0.0 for value in self.h_index_means.values()):
      raise errors.ConfigurationError(
          'Synthesis setting: h_index_means must define positive top, mid and '
          'low means.')

    if not 0.0 < self.accept_fraction < 1.0:
      raise errors.ConfigurationError(
          'Synthesis setting: accept_fraction must be in (0, 1).')

    if self.max_authors < 1 or self.h_index_deviation < 0.0 or (
        self.score_noise < 0.0):
      raise errors.ConfigurationError(
          'Synthesis setting: max_authors must be >= 1 and deviations >= 0.')


class ExperimentPlan(object):
  """Experiment plan.

  Attributes:
    authors_path (str): path of authors.csv of a files source.
    base_seed (int): seed of the first run, later runs use consecutive seeds.
    conference_shaped (bool): True to generate real-format conference
        corpora instead of bias regime corpora.
    lambdas (list[float]): fairness regularization strengths.
    modes (list[str]): fairness modes.
    n_accept (int): number of papers to select or None for the source
        default.
    n_papers (int): number of synthetic papers.
    papers_path (str): path of papers.csv of a files source.
    regime (str): name of the synthetic bias regime.
    seeds (int): number of seeds.
    source (str): synthetic or files.
    stage_weights (dict[str, float]): weight per career stage.
    synthesis (SynthesisParameters): synthetic generator parameters.
    threads (int): maximum number of workers or None for the machine
        parallelism.
    train_config (TrainConfig): training settings, the fairness settings are
        set per cell.
    train_fraction (float): training split fraction.
    weights (list[tuple[float, float]]): (w_race, w_country) pairs of the
        combined mode.
  """

  def __init__(self):
    """Initializes an experiment plan with the default settings."""
    super(ExperimentPlan, self).__init__()
    self.authors_path = None
    self.base_seed = 1
    self.conference_shaped = False
    self.lambdas = [1.0, 2.0, 2.5, 3.0, 5.0, 10.0]
    self.modes = list(definitions.FAIRNESS_MODES)
    self.n_accept = None
    self.n_papers = 530
    self.papers_path = None
    self.regime = definitions.BIAS_LEVEL_HIGH
    self.seeds = 5
    self.source = definitions.SOURCE_SYNTHETIC
    self.stage_weights = dict(definitions.DEFAULT_STAGE_WEIGHTS)
    self.synthesis = SynthesisParameters()
    self.threads = None
    self.train_config = TrainConfig()
    self.train_fraction = 0.8
    self.weights = [(0.32, 0.68), (0.32, 1.36), (0.64, 0.68)]

  @property
  def is_real_format(self):
    """bool: True if the baseline is the historical committee selection."""
    return self.source == definitions.SOURCE_FILES or self.conference_shaped

  def GetSeeds(self):
    """Retrieves the seeds of the runs.

    Returns:
      list[int]: seeds.
    """
    return [self.base_seed + index for index in range(self.seeds)]

  def Validate(self):
    """Validates the plan.

    Raises:
      ConfigurationError: if a setting is not valid.
    """
    if self.source not in definitions.SOURCES:
      raise errors.ConfigurationError(
          f'Unsupported data source: {self.source!s}.')

    if self.source == definitions.SOURCE_FILES and not (
        self.papers_path and self.authors_path):
      raise errors.ConfigurationError(
          'Data source files requires papers_path and authors_path.')

    if self.source == definitions.SOURCE_SYNTHETIC and self.n_papers < 50:
      raise errors.ConfigurationError(
          f'Synthetic corpora need n_papers >= 50, got: {self.n_papers!s}.')

    if not 0.0 < self.train_fraction < 1.0:
      raise errors.ConfigurationError(
          f'train_fraction must be in (0, 1), got: {self.train_fraction!s}.')

    if not isinstance(self.seeds, int) or self.seeds < 1:
      raise errors.ConfigurationError(
          f'seeds must be an integer >= 1, got: {self.seeds!s}.')

    if self.n_accept is not None and (
        not isinstance(self.n_accept, int) or self.n_accept < 1):
      raise errors.ConfigurationError(
          f'n_accept must be an integer >= 1, got: {self.n_accept!s}.')

    if self.threads is not None and (
        not isinstance(self.threads, int) or self.threads < 1):
      raise errors.ConfigurationError(
          f'threads must be an integer >= 1, got: {self.threads!s}.')

    for mode in self.modes:
      if mode not in definitions.FAIRNESS_MODES:
        raise errors.ConfigurationError(f'Unsupported fairness mode: {mode!s}.')

    for lambda_value in self.lambdas:
      if lambda_value is None or lambda_value < 0.0:
        raise errors.ConfigurationError(
            f'lambda must be >= 0, got: {lambda_value!s}.')

    for stage in definitions.CAREER_STAGES:
      if self.stage_weights.get(stage, -1.0) < 0.0:
        raise errors.ConfigurationError(
            f'Stage weight of: {stage:s} must be defined and >= 0.')

    self.train_config.Validate()
    self.synthesis.Validate()


class RunConfig(object):
  """Run configuration.

  Attributes:
    fairness (FairnessSpec): fairness settings of a single run.
    output_directory (str): directory the reports are written to.
    plan (ExperimentPlan): data, training and sweep settings.
  """

  def __init__(self):
    """Initializes a run configuration with the default settings."""
    super(RunConfig, self).__init__()
    self.fairness = FairnessSpec()
    self.output_directory = 'results'
    self.plan = ExperimentPlan()
