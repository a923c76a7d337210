# -*- coding: utf-8 -*-
"""The bias regime definitions registry."""

import typing

from typing import Dict, List, Union  # pylint: disable=unused-import

from fairrank import definitions

if typing.TYPE_CHECKING:
  from fairrank import data_types


class BiasRegimeDefinitionsRegistry(object):
  """Bias regime definitions registry.

  Every bias regime is registered under its lower case name, its aliases and
  its bias level. A bias level holds at most one bias regime, such that a
  regime can be looked up by the severity it models, for example "high",
  independent of the name it was given in a definitions file.
  """

  def __init__(self) -> 'None':
    """Initializes a bias regime definitions registry."""
    super(BiasRegimeDefinitionsRegistry, self).__init__()
    self._aliases: 'Dict[str, str]' = {}
    self._definitions: 'Dict[str, data_types.BiasRegime]' = {}
    self._names_per_level: 'Dict[str, str]' = {}

  def DeregisterDefinition(
      self, bias_regime: 'data_types.BiasRegime') -> 'None':
    """Deregisters a bias regime definition.

    Args:
      bias_regime (BiasRegime): bias regime definition.

    Raises:
      KeyError: if a bias regime definition is not set for the corresponding
          name.
    """
    name = bias_regime.name.lower()
    if name not in self._definitions:
      raise KeyError(f'Definition not set for name: {bias_regime.name:s}.')

    del self._definitions[name]

    for alias in bias_regime.aliases:
      self._aliases.pop(alias.lower(), None)

    if self._names_per_level.get(bias_regime.level, None) == name:
      del self._names_per_level[bias_regime.level]

  def GetDefinitionByLevel(
      self, level: 'str') -> 'Union[data_types.BiasRegime, None]':
    """Retrieves the bias regime definition of a specific bias level.

    Args:
      level (str): bias level, such as "fair", "moderate" or "high".

    Returns:
      BiasRegime: bias regime definition or None if not available.
    """
    name = self._names_per_level.get(level.lower(), None)
    if not name:
      return None

    return self._definitions.get(name, None)

  def GetDefinitionByName(
      self, name: 'str') -> 'Union[data_types.BiasRegime, None]':
    """Retrieves a specific bias regime definition by name, alias or level.

    Names take precedence over aliases and aliases over bias levels.

    Args:
      name (str): name, alias or bias level of the bias regime definition.

    Returns:
      BiasRegime: bias regime definition or None if not available.
    """
    lookup_name = name.lower()
    if lookup_name not in self._definitions:
      lookup_name = self._aliases.get(lookup_name, lookup_name)

    bias_regime = self._definitions.get(lookup_name, None)
    if not bias_regime:
      bias_regime = self.GetDefinitionByLevel(lookup_name)

    return bias_regime

  def GetDefinitions(self) -> 'List[data_types.BiasRegime]':
    """Retrieves the bias regime definitions.

    Returns:
      list[BiasRegime]: bias regime definitions in order of increasing
          severity, from the fair to the high bias level.
    """
    return [
        self._definitions[self._names_per_level[level]]
        for level in definitions.BIAS_LEVELS
        if level in self._names_per_level]

  def GetNames(self) -> 'List[str]':
    """Retrieves the names of the bias regime definitions.

    Returns:
      list[str]: names in registration order.
    """
    return list(self._definitions.keys())

  def RegisterDefinition(
      self, bias_regime: 'data_types.BiasRegime') -> 'None':
    """Registers a bias regime definition.

    Args:
      bias_regime (BiasRegime): bias regime definition.

    Raises:
      KeyError: if bias regime definition is already set for the
          corresponding name, alias or bias level.
      ValueError: if the bias level is not supported.
    """
    if bias_regime.level not in definitions.BIAS_LEVELS:
      raise ValueError(f'Unsupported bias level: {bias_regime.level!s}.')

    name_lower = bias_regime.name.lower()
    if name_lower in self._definitions:
      raise KeyError(f'Definition already set for name: {bias_regime.name:s}.')

    if name_lower in self._aliases:
      raise KeyError(f'Alias already set for name: {bias_regime.name:s}.')

    for alias in bias_regime.aliases:
      if alias.lower() in self._aliases or alias.lower() in self._definitions:
        raise KeyError(f'Alias already set for name: {alias:s}.')

    existing_name = self._names_per_level.get(bias_regime.level, None)
    if existing_name:
      raise KeyError((
          f'Definition: {existing_name:s} already set for level: '
          f'{bias_regime.level:s}.'))

    self._definitions[name_lower] = bias_regime
    self._names_per_level[bias_regime.level] = name_lower

    for alias in bias_regime.aliases:
      self._aliases[alias.lower()] = name_lower
