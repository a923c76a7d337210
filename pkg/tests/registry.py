# -*- coding: utf-8 -*-
"""Tests for the bias regime definitions registry."""

import unittest

from fairrank import data_types
from fairrank import definitions
from fairrank import registry

from tests import test_lib


class BiasRegimeDefinitionsRegistryTest(test_lib.BaseTestCase):
  """Bias regime definitions registry tests."""

  def testRegistration(self):
    """Tests the RegisterDefinition and DeregisterDefinition functions."""
    definitions_registry = registry.BiasRegimeDefinitionsRegistry()

    bias_regime = data_types.BiasRegime(
        'high', definitions.BIAS_LEVEL_HIGH, 8.5, 9.7, 10.0, 0.3,
        aliases=['high-bias'])

    definitions_registry.RegisterDefinition(bias_regime)

    with self.assertRaises(KeyError):
      definitions_registry.RegisterDefinition(bias_regime)

    test_definition = data_types.BiasRegime(
        'High-Bias', definitions.BIAS_LEVEL_HIGH, 8.5, 9.7, 10.0, 0.3)

    with self.assertRaises(KeyError):
      definitions_registry.RegisterDefinition(test_definition)

    test_definition = data_types.BiasRegime(
        'other', definitions.BIAS_LEVEL_HIGH, 8.5, 9.7, 10.0, 0.3,
        aliases=['HIGH'])

    with self.assertRaises(KeyError):
      definitions_registry.RegisterDefinition(test_definition)

    with self.assertRaises(ValueError):
      definitions_registry.RegisterDefinition(data_types.BiasRegime(
          'extreme', 'extreme', 1.0, 1.0, 1.0, 0.5))

    test_definition = data_types.BiasRegime(
        'severe', definitions.BIAS_LEVEL_HIGH, 5.0, 5.0, 5.0, 0.4)

    with self.assertRaises(KeyError):
      definitions_registry.RegisterDefinition(test_definition)

    definitions_registry.DeregisterDefinition(bias_regime)

    with self.assertRaises(KeyError):
      definitions_registry.DeregisterDefinition(bias_regime)

    definitions_registry.RegisterDefinition(test_definition)
    self.assertIs(
        definitions_registry.GetDefinitionByLevel('high'), test_definition)

  def testGetDefinitionByName(self):
    """Tests the GetDefinitionByName function."""
    definitions_registry = registry.BiasRegimeDefinitionsRegistry()

    bias_regime = data_types.BiasRegime(
        'fair', definitions.BIAS_LEVEL_FAIR, 48.8, 51.5, 52.3, 0.0,
        aliases=['near-fair'])
    definitions_registry.RegisterDefinition(bias_regime)

    test_definition = definitions_registry.GetDefinitionByName('fair')
    self.assertIs(test_definition, bias_regime)

    test_definition = definitions_registry.GetDefinitionByName('FAIR')
    self.assertIs(test_definition, bias_regime)

    test_definition = definitions_registry.GetDefinitionByName('Near-Fair')
    self.assertIs(test_definition, bias_regime)

    test_definition = definitions_registry.GetDefinitionByName('bogus')
    self.assertIsNone(test_definition)

  def testGetDefinitionByLevel(self):
    """Tests the GetDefinitionByLevel function."""
    definitions_registry = registry.BiasRegimeDefinitionsRegistry()

    bias_regime = data_types.BiasRegime(
        'mild', definitions.BIAS_LEVEL_MODERATE, 20.0, 25.0, 30.0, 0.1)
    definitions_registry.RegisterDefinition(bias_regime)

    test_definition = definitions_registry.GetDefinitionByLevel('moderate')
    self.assertIs(test_definition, bias_regime)

    test_definition = definitions_registry.GetDefinitionByLevel('high')
    self.assertIsNone(test_definition)

    test_definition = definitions_registry.GetDefinitionByName('Moderate')
    self.assertIs(test_definition, bias_regime)

  def testGetDefinitions(self):
    """Tests the GetDefinitions and GetNames functions."""
    definitions_registry = registry.BiasRegimeDefinitionsRegistry()

    for name, level in (
        ('severe', definitions.BIAS_LEVEL_HIGH),
        ('even', definitions.BIAS_LEVEL_FAIR),
        ('mild', definitions.BIAS_LEVEL_MODERATE)):
      definitions_registry.RegisterDefinition(data_types.BiasRegime(
          name, level, 30.0, 30.0, 30.0, 0.0))

    self.assertEqual(
        [bias_regime.name
         for bias_regime in definitions_registry.GetDefinitions()],
        ['even', 'mild', 'severe'])
    self.assertEqual(
        definitions_registry.GetNames(), ['severe', 'even', 'mild'])


if __name__ == '__main__':
  unittest.main()
