# -*- coding: utf-8 -*-
"""Deterministic seeded pseudo random number generator."""

import numpy


class Rng(object):
  """Seeded pseudo random number generator.

  The generator is numpy's Philox, a counter-based generator (4x64 rounds),
  keyed from a seed sequence of the seed and the stream number. The same
  seed and stream produce the same bit stream on every platform.

  Attributes:
    seed (int): 64-bit seed.
    stream (int): stream number, distinct streams are independent.
  """

  def __init__(self, seed: 'int', stream: 'int' = 0) -> 'None':
    """Initializes a random number generator.

    Args:
      seed (int): 64-bit seed.
      stream (Optional[int]): stream number.
    """
    super(Rng, self).__init__()
    seed_sequence = numpy.random.SeedSequence([
        int(seed) & 0xffffffffffffffff, int(stream)])
    self._generator = numpy.random.Generator(
        numpy.random.Philox(seed_sequence))
    self.seed: 'int' = int(seed)
    self.stream: 'int' = int(stream)

  def Choice(self, number_of_options, size, probabilities=None):
    """Draws category indexes.

    Args:
      number_of_options (int): number of categories.
      size (int): number of draws.
      probabilities (Optional[list[float]]): probability per category.

    Returns:
      numpy.ndarray: category indexes.
    """
    return self._generator.choice(
        number_of_options, size=size, p=probabilities)

  def Integers(self, low, high, size=None):
    """Draws integers from the half-open interval [low, high).

    Args:
      low (int): lowest value.
      high (int): one above the highest value.
      size (Optional[int]): number of draws, None for a scalar.

    Returns:
      int|numpy.ndarray: drawn integers.
    """
    return self._generator.integers(low, high, size=size)

  def Normal(self, mean, standard_deviation, size=None):
    """Draws normally distributed values.

    Args:
      mean (float|numpy.ndarray): mean.
      standard_deviation (float|numpy.ndarray): standard deviation.
      size (Optional[int|tuple[int]]): shape of the draw.

    Returns:
      float|numpy.ndarray: drawn values.
    """
    return self._generator.normal(mean, standard_deviation, size=size)

  def Permutation(self, values):
    """Permutes values or a range.

    Args:
      values (int|numpy.ndarray): number of items or array to permute.

    Returns:
      numpy.ndarray: permuted copy.
    """
    return self._generator.permutation(values)

  def Random(self, size=None):
    """Draws values from the half-open interval [0, 1).

    Args:
      size (Optional[int|tuple[int]]): shape of the draw.

    Returns:
      float|numpy.ndarray: drawn values.
    """
    return self._generator.random(size=size)

  def Uniform(self, low, high, size=None):
    """Draws uniformly distributed values.

    Args:
      low (float): lower bound.
      high (float): upper bound.
      size (Optional[int|tuple[int]]): shape of the draw.

    Returns:
      float|numpy.ndarray: drawn values.
    """
    return self._generator.uniform(low, high, size=size)
