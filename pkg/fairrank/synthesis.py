# -*- coding: utf-8 -*-
"""Synthetic paper corpus generators."""

import logging

import numpy

from fairrank import data_types
from fairrank import definitions
from fairrank import errors


MINIMUM_NUMBER_OF_PAPERS = 50

# Career stage probabilities in definitions.CAREER_STAGES order. Authors of
# protected groups skew towards early career stages.
PROTECTED_STAGE_PROBABILITIES = (0.05, 0.10, 0.10, 0.25, 0.40, 0.10)
OTHER_STAGE_PROBABILITIES = (0.25, 0.20, 0.10, 0.15, 0.20, 0.10)

PROTECTED_RACE_CHOICES = (definitions.RACE_BLACK, definitions.RACE_HISPANIC)
OTHER_RACE_CHOICES = (definitions.RACE_WHITE, definitions.RACE_ASIAN)
OTHER_RACE_PROBABILITIES = (0.65, 0.35)

# Probability that a co-author of a protected paper is protected as well.
COAUTHOR_PROTECTED_PROBABILITY = 0.5

# Conference probabilities per tier in IUI, DIS, SIGCHI order.
TIER_CONFERENCE_PROBABILITIES = {
    definitions.TIER_LOW: (0.35, 0.35, 0.30),
    definitions.TIER_MID: (0.20, 0.30, 0.50),
    definitions.TIER_TOP: (0.04, 0.06, 0.90)}

# Protected paper shares in percent and mean quality per conference of the
# conference shaped corpus.
CONFERENCE_SHARES = {
    definitions.CONFERENCE_DIS: {
        definitions.ATTRIBUTE_COUNTRY: 24.56,
        definitions.ATTRIBUTE_GENDER: 65.79,
        definitions.ATTRIBUTE_RACE: 35.09},
    definitions.CONFERENCE_IUI: {
        definitions.ATTRIBUTE_COUNTRY: 39.06,
        definitions.ATTRIBUTE_GENDER: 43.75,
        definitions.ATTRIBUTE_RACE: 51.56},
    definitions.CONFERENCE_SIGCHI: {
        definitions.ATTRIBUTE_COUNTRY: 21.94,
        definitions.ATTRIBUTE_GENDER: 41.88,
        definitions.ATTRIBUTE_RACE: 6.84}}

CONFERENCE_H_INDEX_MEANS = {
    definitions.CONFERENCE_DIS: 12.0,
    definitions.CONFERENCE_IUI: 10.0,
    definitions.CONFERENCE_SIGCHI: 25.0}

_GENERATED_ATTRIBUTES = (
    definitions.ATTRIBUTE_GENDER,
    definitions.ATTRIBUTE_RACE,
    definitions.ATTRIBUTE_COUNTRY)


def _AllocateLargestRemainder(total, fractions):
  """Allocates a total over fractions by largest remainder.

  Args:
    total (int): total to allocate.
    fractions (list[float]): fractions that sum to 1.

  Returns:
    list[int]: allocated counts that sum to total.
  """
  quotas = [total * fraction for fraction in fractions]
  counts = [int(numpy.floor(quota)) for quota in quotas]
  order = sorted(
      range(len(quotas)), key=lambda index: (counts[index] - quotas[index],
                                             index))
  for index in order[:total - sum(counts)]:
    counts[index] += 1
  return counts


def _TruncatedNormal(rng, mean, standard_deviation, size):
  """Draws normally distributed values truncated below at 0.

  Args:
    rng (Rng): random number generator.
    mean (float): mean before truncation.
    standard_deviation (float): standard deviation before truncation.
    size (int): number of values.

  Returns:
    numpy.ndarray: non-negative values.
  """
  values = rng.Normal(mean, standard_deviation, size=size)
  negative = values < 0.0
  while negative.any():
    values[negative] = rng.Normal(
        mean, standard_deviation, size=int(negative.sum()))
    negative = values < 0.0
  return values


def _ProtectedPaperFlags(rng, number_of_papers, share):
  """Draws an exact number of protected papers.

  Args:
    rng (Rng): random number generator.
    number_of_papers (int): number of papers.
    share (float): protected share in percent.

  Returns:
    numpy.ndarray: boolean protected flag per paper.
  """
  number_of_protected = int(round(share * number_of_papers / 100.0))
  flags = numpy.zeros(number_of_papers, dtype=bool)
  flags[rng.Permutation(number_of_papers)[:number_of_protected]] = True
  return flags


def _ProtectedAuthorFlags(rng, paper_is_protected, number_of_authors):
  """Draws the protected flags of the authors of a paper.

  A protected paper has at least one protected author, the co-authors are
  protected with COAUTHOR_PROTECTED_PROBABILITY. The authors of other papers
  are not protected.

  Args:
    rng (Rng): random number generator.
    paper_is_protected (bool): True if the paper is protected.
    number_of_authors (int): number of authors.

  Returns:
    numpy.ndarray: boolean protected flag per author.
  """
  if not paper_is_protected:
    return numpy.zeros(number_of_authors, dtype=bool)

  flags = rng.Random(size=number_of_authors) < COAUTHOR_PROTECTED_PROBABILITY
  flags[int(rng.Integers(0, number_of_authors))] = True
  return flags


class _CorpusBuilder(object):
  """Builds papers and authors from paper level draws."""

  def __init__(self, rng, stage_weights, penalty):
    """Initializes a corpus builder.

    Args:
      rng (Rng): random number generator.
      stage_weights (dict[str, float]): weight per career stage.
      penalty (float): fraction by which the observed h-index of protected
          authors is reduced.
    """
    super(_CorpusBuilder, self).__init__()
    self._penalty = penalty
    self._rng = rng
    self._stage_weights = stage_weights
    self.authors = []

  def AddAuthors(self, paper_flags, quality, maximum_number_of_authors):
    """Adds the authors of a paper.

    The weighted h-index of every author is drawn around the paper quality,
    the stored h-index is the weighted value divided by the stage weight.

    Args:
      paper_flags (dict[str, bool]): paper protected flag per attribute.
      quality (tuple[float, float]): mean and standard deviation of the
          weighted h-index of the authors.
      maximum_number_of_authors (int): maximum number of authors.

    Returns:
      tuple[list[str], float]: author identifiers and mean true weighted
          h-index of the authors.
    """
    number_of_authors = int(self._rng.Integers(
        1, maximum_number_of_authors + 1))

    author_flags = {
        attribute: _ProtectedAuthorFlags(
            self._rng, paper_flags[attribute], number_of_authors)
        for attribute in _GENERATED_ATTRIBUTES}

    mean, standard_deviation = quality
    weighted_h_indexes = _TruncatedNormal(
        self._rng, mean, standard_deviation, number_of_authors)

    author_ids = []
    for index in range(number_of_authors):
      is_protected = bool(
          author_flags[definitions.ATTRIBUTE_RACE][index] or
          author_flags[definitions.ATTRIBUTE_COUNTRY][index])

      if author_flags[definitions.ATTRIBUTE_RACE][index]:
        race = PROTECTED_RACE_CHOICES[int(self._rng.Choice(2, None))]
      else:
        race = OTHER_RACE_CHOICES[int(self._rng.Choice(
            2, None, probabilities=OTHER_RACE_PROBABILITIES))]

      if author_flags[definitions.ATTRIBUTE_COUNTRY][index]:
        country_class = definitions.COUNTRY_CLASS_UNDERDEVELOPED
      else:
        country_class = definitions.COUNTRY_CLASS_DEVELOPED

      if author_flags[definitions.ATTRIBUTE_GENDER][index]:
        gender = definitions.GENDER_FEMALE
      else:
        gender = definitions.GENDER_MALE

      if is_protected:
        stage_probabilities = PROTECTED_STAGE_PROBABILITIES
      else:
        stage_probabilities = OTHER_STAGE_PROBABILITIES
      career_stage = definitions.CAREER_STAGES[int(self._rng.Choice(
          len(definitions.CAREER_STAGES), None,
          probabilities=stage_probabilities))]

      observed = weighted_h_indexes[index]
      if is_protected:
        observed *= 1.0 - self._penalty

      stage_weight = self._stage_weights[career_stage]
      if stage_weight > 0.0:
        h_index = float(observed / stage_weight)
      else:
        h_index = float(observed)

      author_id = f'A{len(self.authors) + 1:06d}'
      self.authors.append(data_types.AuthorRecord(
          author_id, gender, race, country_class, career_stage,
          round(h_index, 4)))
      author_ids.append(author_id)

    return author_ids, float(weighted_h_indexes.mean())


def _DrawPaperFlags(rng, number_of_papers, shares):
  """Draws the paper level protected flags.

  Args:
    rng (Rng): random number generator.
    number_of_papers (int): number of papers.
    shares (dict[str, float]): protected share in percent per attribute.

  Returns:
    dict[str, numpy.ndarray]: protected flag per paper per attribute.
  """
  return {
      attribute: _ProtectedPaperFlags(rng, number_of_papers, shares[attribute])
      for attribute in _GENERATED_ATTRIBUTES}


def _AssignTiers(rng, paper_flags, tier_mix):
  """Assigns tiers stratified by the protected race and country flags.

  Args:
    rng (Rng): random number generator.
    paper_flags (dict[str, numpy.ndarray]): protected flag per paper per
        attribute.
    tier_mix (dict[str, float]): fraction of papers per tier.

  Returns:
    list[str]: tier per paper.
  """
  race_flags = paper_flags[definitions.ATTRIBUTE_RACE]
  country_flags = paper_flags[definitions.ATTRIBUTE_COUNTRY]
  tiers = [None] * race_flags.size

  fractions = [tier_mix[tier] for tier in definitions.TIERS]
  for race_flag in (False, True):
    for country_flag in (False, True):
      rows = numpy.flatnonzero(
          (race_flags == race_flag) & (country_flags == country_flag))
      rows = rng.Permutation(rows)
      counts = _AllocateLargestRemainder(rows.size, fractions)

      offset = 0
      for tier, count in zip(definitions.TIERS, counts):
        for row in rows[offset:offset + count]:
          tiers[int(row)] = tier
        offset += count

  return tiers


def _LabelTopFraction(scores, number_of_accepted):
  """Labels the highest scoring papers as accepted.

  Args:
    scores (numpy.ndarray): score per paper.
    number_of_accepted (int): number of accepted papers.

  Returns:
    numpy.ndarray: label per paper.
  """
  order = numpy.lexsort((numpy.arange(scores.size), -scores))
  labels = numpy.zeros(scores.size, dtype=numpy.int64)
  labels[order[:number_of_accepted]] = 1
  return labels


def GenerateSynthetic(
    regime, n_papers, rng, parameters=None, stage_weights=None):
  """Generates a synthetic corpus of a bias regime.

  The paper level protected shares match the regime targets exactly up to
  rounding. Every combination of race and country flags gets the same tier
  mix. Under bias the observed h-index of protected authors is reduced and the
  acceptance score of papers protected on race or country is penalized by
  the regime penalty. The highest scoring papers are labeled accepted.

  Args:
    regime (BiasRegime): bias regime.
    n_papers (int): number of papers.
    rng (Rng): random number generator.
    parameters (Optional[SynthesisParameters]): generator parameters.
    stage_weights (Optional[dict[str, float]]): weight per career stage.

  Returns:
    tuple[list[PaperRecord], list[AuthorRecord]]: paper and author records.

  Raises:
    ConfigurationError: if the number of papers or a parameter is not valid.
  """
  if not isinstance(n_papers, int) or n_papers < MINIMUM_NUMBER_OF_PAPERS:
    raise errors.ConfigurationError(
        f'Synthetic corpora need n >= {MINIMUM_NUMBER_OF_PAPERS:d}, got: '
        f'{n_papers!s}.')

  parameters = parameters or data_types.SynthesisParameters()
  parameters.Validate()
  stage_weights = stage_weights or definitions.DEFAULT_STAGE_WEIGHTS

  shares = {
      attribute: regime.GetShare(attribute)
      for attribute in _GENERATED_ATTRIBUTES}
  paper_flags = _DrawPaperFlags(rng, n_papers, shares)
  tiers = _AssignTiers(rng, paper_flags, parameters.tier_mix)

  builder = _CorpusBuilder(rng, stage_weights, regime.penalty)
  conferences = sorted(definitions.CONFERENCES)

  papers = []
  scores = numpy.zeros(n_papers, dtype=numpy.float64)
  for index in range(n_papers):
    tier = tiers[index]
    flags = {
        attribute: bool(paper_flags[attribute][index])
        for attribute in _GENERATED_ATTRIBUTES}

    mean = parameters.h_index_means[tier]
    author_ids, quality = builder.AddAuthors(
        flags, (mean, mean * parameters.h_index_deviation),
        parameters.max_authors)

    conference = conferences[int(rng.Choice(
        len(conferences), None,
        probabilities=TIER_CONFERENCE_PROBABILITIES[tier]))]

    score = quality * float(numpy.exp(rng.Normal(0.0, parameters.score_noise)))
    if flags[definitions.ATTRIBUTE_RACE] or flags[
        definitions.ATTRIBUTE_COUNTRY]:
      score *= 1.0 - regime.penalty
    scores[index] = score

    papers.append(data_types.PaperRecord(
        f'P{index + 1:05d}', f'Synthetic paper {index + 1:d}', author_ids,
        conference, 0, tier=tier))

  number_of_accepted = int(round(parameters.accept_fraction * n_papers))
  for paper, label in zip(papers, _LabelTopFraction(
      scores, number_of_accepted)):
    paper.accepted = int(label)

  logging.debug(
      f'Generated: {n_papers:d} papers and {len(builder.authors):d} authors '
      f'for bias regime: {regime.name:s}.')
  return papers, builder.authors


def GenerateConferenceCorpus(
    rng, n_sigchi=351, n_dis=115, n_iui=64, parameters=None,
    stage_weights=None):
  """Generates a corpus shaped like the SIGCHI, DIS and IUI submissions.

  The protected shares follow the participation per conference. SIGCHI
  papers form the historical committee selection and are labeled accepted.
  Tiers are not set.

  Args:
    rng (Rng): random number generator.
    n_sigchi (Optional[int]): number of SIGCHI papers.
    n_dis (Optional[int]): number of DIS papers.
    n_iui (Optional[int]): number of IUI papers.
    parameters (Optional[SynthesisParameters]): generator parameters, of
        which the h-index deviation and maximum number of authors are used.
    stage_weights (Optional[dict[str, float]]): weight per career stage.

  Returns:
    tuple[list[PaperRecord], list[AuthorRecord]]: paper and author records.

  Raises:
    ConfigurationError: if a number of papers is not valid.
  """
  counts = {
      definitions.CONFERENCE_DIS: n_dis,
      definitions.CONFERENCE_IUI: n_iui,
      definitions.CONFERENCE_SIGCHI: n_sigchi}
  for conference, count in counts.items():
    if not isinstance(count, int) or count < 1:
      name = definitions.CONFERENCE_NAMES[conference]
      raise errors.ConfigurationError(
          f'Number of {name:s} papers must be >= 1, got: {count!s}.')

  parameters = parameters or data_types.SynthesisParameters()
  stage_weights = stage_weights or definitions.DEFAULT_STAGE_WEIGHTS
  builder = _CorpusBuilder(rng, stage_weights, 0.0)

  papers = []
  for conference in (
      definitions.CONFERENCE_SIGCHI, definitions.CONFERENCE_DIS,
      definitions.CONFERENCE_IUI):
    count = counts[conference]
    paper_flags = _DrawPaperFlags(rng, count, CONFERENCE_SHARES[conference])
    mean = CONFERENCE_H_INDEX_MEANS[conference]
    accepted = int(conference == definitions.CONFERENCE_SIGCHI)

    for index in range(count):
      flags = {
          attribute: bool(paper_flags[attribute][index])
          for attribute in _GENERATED_ATTRIBUTES}
      author_ids, _ = builder.AddAuthors(
          flags, (mean, mean * parameters.h_index_deviation),
          parameters.max_authors)

      paper_number = len(papers) + 1
      papers.append(data_types.PaperRecord(
          f'P{paper_number:05d}', f'Submission {paper_number:d}', author_ids,
          conference, accepted))

  return papers, builder.authors
