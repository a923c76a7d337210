# -*- coding: utf-8 -*-
"""Two hidden layer feed-forward network with batch normalization."""

import collections
import copy

import numpy

from fairrank import definitions
from fairrank import errors


_BATCHNORM_EPSILON = 1e-5

# Running statistics are updated as 0.9 * old + 0.1 * batch.
_BATCHNORM_MOMENTUM = 0.1

# Keeps sigmoid outputs strictly inside (0, 1) for large logits.
_PROBABILITY_FLOOR = 1e-15

_NUMBER_OF_HIDDEN_LAYERS = 2


def _GetParameterNames():
  """Retrieves the trainable parameter names in update order.

  Returns:
    list[str]: parameter names.
  """
  names = []
  for layer_index in range(_NUMBER_OF_HIDDEN_LAYERS):
    names.extend([
        f'weights_{layer_index:d}', f'biases_{layer_index:d}',
        f'gamma_{layer_index:d}', f'beta_{layer_index:d}'])

  names.extend([
      f'weights_{_NUMBER_OF_HIDDEN_LAYERS:d}',
      f'biases_{_NUMBER_OF_HIDDEN_LAYERS:d}'])
  return names


PARAMETER_NAMES = tuple(_GetParameterNames())


class AdamState(object):
  """Adam optimizer state.

  Attributes:
    first_moments (dict[str, numpy.ndarray]): first moment accumulator per
        parameter name.
    second_moments (dict[str, numpy.ndarray]): second moment accumulator per
        parameter name.
    step (int): number of updates applied.
  """

  def __init__(self, parameters):
    """Initializes a zeroed Adam state.

    Args:
      parameters (dict[str, numpy.ndarray]): parameters per name.
    """
    super(AdamState, self).__init__()
    self.first_moments = collections.OrderedDict(
        (name, numpy.zeros_like(value)) for name, value in parameters.items())
    self.second_moments = collections.OrderedDict(
        (name, numpy.zeros_like(value)) for name, value in parameters.items())
    self.step = 0


class ModelParams(object):
  """Parameters of the network.

  Each hidden layer is dense -> batch normalization -> ReLU, the output layer
  is dense -> sigmoid with width 1.

  Attributes:
    adam_state (AdamState): optimizer state.
    betas (list[numpy.ndarray]): batch normalization shift per hidden layer.
    biases (list[numpy.ndarray]): bias vector per dense layer.
    gammas (list[numpy.ndarray]): batch normalization scale per hidden layer.
    layer_sizes (list[int]): input, hidden and output widths.
    running_means (list[numpy.ndarray]): running mean per hidden layer.
    running_variances (list[numpy.ndarray]): running variance per hidden
        layer.
    version (int): number of parameter updates, used to detect stale
        activation caches.
    weights (list[numpy.ndarray]): weight matrix per dense layer, shaped
        (fan_in, fan_out).
  """

  def __init__(self, layer_sizes):
    """Initializes zeroed parameters.

    Args:
      layer_sizes (list[int]): input, hidden and output widths.
    """
    super(ModelParams, self).__init__()
    self.layer_sizes = list(layer_sizes)
    self.weights = [
        numpy.zeros((fan_in, fan_out), dtype=numpy.float64)
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:])]
    self.biases = [
        numpy.zeros(fan_out, dtype=numpy.float64)
        for fan_out in layer_sizes[1:]]

    hidden_sizes = layer_sizes[1:-1]
    self.gammas = [numpy.ones(size, dtype=numpy.float64)
                   for size in hidden_sizes]
    self.betas = [numpy.zeros(size, dtype=numpy.float64)
                  for size in hidden_sizes]
    self.running_means = [numpy.zeros(size, dtype=numpy.float64)
                          for size in hidden_sizes]
    self.running_variances = [numpy.ones(size, dtype=numpy.float64)
                              for size in hidden_sizes]

    self.adam_state = AdamState(self.GetParameters())
    self.version = 0

  def Copy(self):
    """Copies the parameters, including the optimizer state.

    Returns:
      ModelParams: deep copy.
    """
    return copy.deepcopy(self)

  def GetParameters(self):
    """Retrieves the trainable parameters.

    The returned arrays are the parameter arrays themselves, not copies.

    Returns:
      collections.OrderedDict[str, numpy.ndarray]: parameters per name.
    """
    parameters = collections.OrderedDict()
    for layer_index in range(_NUMBER_OF_HIDDEN_LAYERS):
      parameters[f'weights_{layer_index:d}'] = self.weights[layer_index]
      parameters[f'biases_{layer_index:d}'] = self.biases[layer_index]
      parameters[f'gamma_{layer_index:d}'] = self.gammas[layer_index]
      parameters[f'beta_{layer_index:d}'] = self.betas[layer_index]

    output_index = _NUMBER_OF_HIDDEN_LAYERS
    parameters[f'weights_{output_index:d}'] = self.weights[output_index]
    parameters[f'biases_{output_index:d}'] = self.biases[output_index]
    return parameters

  def IsIdentical(self, other):
    """Determines if two parameter sets are bitwise identical.

    Args:
      other (ModelParams): parameters to compare with.

    Returns:
      bool: True if all parameters, running statistics and optimizer state
          are identical.
    """
    if self.layer_sizes != other.layer_sizes:
      return False

    arrays = list(zip(self.GetParameters().values(),
                      other.GetParameters().values()))
    arrays.extend(zip(self.running_means, other.running_means))
    arrays.extend(zip(self.running_variances, other.running_variances))
    arrays.extend(zip(self.adam_state.first_moments.values(),
                      other.adam_state.first_moments.values()))
    arrays.extend(zip(self.adam_state.second_moments.values(),
                      other.adam_state.second_moments.values()))

    if self.adam_state.step != other.adam_state.step:
      return False

    return all(
        first.tobytes() == second.tobytes() for first, second in arrays)


class ActivationCache(object):
  """Intermediate values of a forward pass needed by the backward pass.

  Attributes:
    batch_size (int): number of rows in the batch.
    hidden_layers (list[dict[str, numpy.ndarray]]): per hidden layer: inputs,
        normalized values, inverse standard deviations, batch normalization
        outputs.
    mode (str): forward mode.
    output_inputs (numpy.ndarray): inputs of the output layer.
    params_identifier (int): identifier of the parameters object.
    params_version (int): version of the parameters at forward time.
    predictions (numpy.ndarray): predicted probabilities.
  """

  def __init__(self, params, mode, batch_size):
    """Initializes an activation cache.

    Args:
      params (ModelParams): parameters of the forward pass.
      mode (str): forward mode.
      batch_size (int): number of rows in the batch.
    """
    super(ActivationCache, self).__init__()
    self.batch_size = batch_size
    self.hidden_layers = []
    self.mode = mode
    self.output_inputs = None
    self.params_identifier = id(params)
    self.params_version = params.version
    self.predictions = None


def _Sigmoid(logits):
  """Computes a numerically stable logistic sigmoid.

  Args:
    logits (numpy.ndarray): logits.

  Returns:
    numpy.ndarray: probabilities strictly inside (0, 1).
  """
  exponentials = numpy.exp(-numpy.abs(logits))
  probabilities = numpy.where(
      logits >= 0.0, 1.0 / (1.0 + exponentials),
      exponentials / (1.0 + exponentials))
  return numpy.clip(
      probabilities, _PROBABILITY_FLOOR, 1.0 - _PROBABILITY_FLOOR)


def InitParams(layer_sizes, rng):
  """Initializes network parameters.

  Weights are drawn from U(-s, s) with s = sqrt(6 / (fan_in + fan_out)),
  biases and batch normalization shifts are zero, scales are one and running
  statistics are (0, 1).

  Args:
    layer_sizes (list[int]): input, two hidden and output widths.
    rng (Rng): random number generator.

  Returns:
    ModelParams: initialized parameters.

  Raises:
    ConfigurationError: if the layer sizes are not supported.
  """
  layer_sizes = list(layer_sizes or [])
  if len(layer_sizes) != _NUMBER_OF_HIDDEN_LAYERS + 2:
    raise errors.ConfigurationError(
        f'Unsupported number of layer sizes: {len(layer_sizes):d}, expected '
        f'input, two hidden and output widths.')

  if layer_sizes[-1] != 1:
    raise errors.ConfigurationError(
        f'Unsupported output width: {layer_sizes[-1]!s}, expected 1.')

  for size in layer_sizes:
    if (not isinstance(size, (int, numpy.integer)) or
        isinstance(size, bool) or size < 1):
      raise errors.ConfigurationError(f'Unsupported layer size: {size!s}.')

  params = ModelParams(layer_sizes)
  for layer_index, weights in enumerate(params.weights):
    fan_in, fan_out = weights.shape
    scale = numpy.sqrt(6.0 / (fan_in + fan_out))
    params.weights[layer_index][:] = rng.Uniform(
        -scale, scale, size=(fan_in, fan_out))

  return params


def Forward(params, batch, mode):
  """Runs the forward pass.

  In train mode batch normalization uses the batch statistics and updates
  the running statistics. In eval mode only the running statistics are used
  and the parameters are not modified.

  Args:
    params (ModelParams): parameters.
    batch (numpy.ndarray): input rows, shaped (rows, layer_sizes[0]).
    mode (str): MODE_TRAIN or MODE_EVAL.

  Returns:
    tuple[numpy.ndarray, ActivationCache]: predicted probabilities per row
        and the activation cache.

  Raises:
    ConfigurationError: if the mode is not supported.
    DegenerateBatchError: if a train mode batch has fewer than 2 rows.
    NumericError: if the batch contains non-finite values.
    ShapeError: if the batch does not match the input width.
  """
  if mode not in (definitions.MODE_TRAIN, definitions.MODE_EVAL):
    raise errors.ConfigurationError(f'Unsupported forward mode: {mode!s}.')

  batch = numpy.asarray(batch, dtype=numpy.float64)
  if batch.ndim != 2 or batch.shape[1] != params.layer_sizes[0]:
    raise errors.ShapeError(
        f'Batch shape: {batch.shape!s} does not match input width: '
        f'{params.layer_sizes[0]:d}.')

  number_of_rows = batch.shape[0]
  if mode == definitions.MODE_TRAIN and number_of_rows < 2:
    raise errors.DegenerateBatchError(
        f'Train mode batch needs at least 2 rows, got: {number_of_rows:d}.')

  if not numpy.all(numpy.isfinite(batch)):
    raise errors.NumericError('Batch contains non-finite values.')

  cache = ActivationCache(params, mode, number_of_rows)

  inputs = batch
  for layer_index in range(_NUMBER_OF_HIDDEN_LAYERS):
    pre_activations = (
        inputs @ params.weights[layer_index] + params.biases[layer_index])

    if mode == definitions.MODE_TRAIN:
      mean = pre_activations.mean(axis=0)
      variance = pre_activations.var(axis=0)

      params.running_means[layer_index] *= 1.0 - _BATCHNORM_MOMENTUM
      params.running_means[layer_index] += _BATCHNORM_MOMENTUM * mean
      params.running_variances[layer_index] *= 1.0 - _BATCHNORM_MOMENTUM
      params.running_variances[layer_index] += _BATCHNORM_MOMENTUM * variance
    else:
      mean = params.running_means[layer_index]
      variance = params.running_variances[layer_index]

    inverse_deviation = 1.0 / numpy.sqrt(variance + _BATCHNORM_EPSILON)
    normalized = (pre_activations - mean) * inverse_deviation
    normalized_outputs = (
        params.gammas[layer_index] * normalized + params.betas[layer_index])

    cache.hidden_layers.append({
        'inputs': inputs,
        'inverse_deviation': inverse_deviation,
        'normalized': normalized,
        'normalized_outputs': normalized_outputs})

    inputs = numpy.maximum(normalized_outputs, 0.0)

  output_index = _NUMBER_OF_HIDDEN_LAYERS
  logits = inputs @ params.weights[output_index] + params.biases[output_index]
  predictions = _Sigmoid(logits[:, 0])

  cache.output_inputs = inputs
  cache.predictions = predictions
  return predictions, cache


def Backward(params, cache, prediction_gradients):
  """Runs the backward pass.

  Args:
    params (ModelParams): parameters used by the forward pass.
    cache (ActivationCache): cache of a train mode forward pass.
    prediction_gradients (numpy.ndarray): gradient of the loss with respect
        to each predicted probability.

  Returns:
    collections.OrderedDict[str, numpy.ndarray]: gradient per parameter name.

  Raises:
    InvariantError: if the cache is not of a train mode forward pass on the
        current parameters.
    ShapeError: if the number of gradients does not match the batch.
  """
  if (cache.mode != definitions.MODE_TRAIN or
      cache.params_identifier != id(params) or
      cache.params_version != params.version):
    raise errors.InvariantError(
        'Activation cache is stale or was not produced by a train mode '
        'forward pass on these parameters.')

  prediction_gradients = numpy.asarray(
      prediction_gradients, dtype=numpy.float64)
  if prediction_gradients.shape != (cache.batch_size, ):
    raise errors.ShapeError(
        f'Number of prediction gradients: {prediction_gradients.shape!s} '
        f'does not match batch size: {cache.batch_size:d}.')

  gradients = {}

  predictions = cache.predictions
  logit_gradients = (
      prediction_gradients * predictions * (1.0 - predictions))[:, None]

  output_index = _NUMBER_OF_HIDDEN_LAYERS
  gradients[f'weights_{output_index:d}'] = (
      cache.output_inputs.T @ logit_gradients)
  gradients[f'biases_{output_index:d}'] = logit_gradients.sum(axis=0)
  output_gradients = logit_gradients @ params.weights[output_index].T

  number_of_rows = float(cache.batch_size)
  for layer_index in reversed(range(_NUMBER_OF_HIDDEN_LAYERS)):
    layer_cache = cache.hidden_layers[layer_index]
    normalized = layer_cache['normalized']

    normalized_output_gradients = output_gradients * (
        layer_cache['normalized_outputs'] > 0.0)

    gradients[f'gamma_{layer_index:d}'] = (
        normalized_output_gradients * normalized).sum(axis=0)
    gradients[f'beta_{layer_index:d}'] = normalized_output_gradients.sum(
        axis=0)

    normalized_gradients = (
        normalized_output_gradients * params.gammas[layer_index])
    pre_activation_gradients = (
        layer_cache['inverse_deviation'] / number_of_rows) * (
            number_of_rows * normalized_gradients -
            normalized_gradients.sum(axis=0) -
            normalized * (normalized_gradients * normalized).sum(axis=0))

    gradients[f'weights_{layer_index:d}'] = (
        layer_cache['inputs'].T @ pre_activation_gradients)
    gradients[f'biases_{layer_index:d}'] = pre_activation_gradients.sum(
        axis=0)

    if layer_index > 0:
      output_gradients = (
          pre_activation_gradients @ params.weights[layer_index].T)

  return collections.OrderedDict(
      (name, gradients[name]) for name in PARAMETER_NAMES)
