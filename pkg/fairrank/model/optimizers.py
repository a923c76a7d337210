# -*- coding: utf-8 -*-
"""Adam optimizer."""

import numpy

from fairrank import errors


ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8


def AdamStep(params, gradients, learning_rate):
  """Applies one Adam update to the parameters in place.

  Args:
    params (ModelParams): parameters, including the optimizer state.
    gradients (dict[str, numpy.ndarray]): gradient per parameter name.
    learning_rate (float): learning rate.

  Returns:
    ModelParams: the updated parameters.

  Raises:
    ConfigurationError: if the learning rate is not a finite non-negative
        value.
    NumericError: if a gradient contains a non-finite value, in which case no
        parameter is updated.
    ShapeError: if the gradients do not match the parameters.
  """
  if not numpy.isfinite(learning_rate) or learning_rate < 0.0:
    raise errors.ConfigurationError(
        f'Unsupported learning rate: {learning_rate!s}.')

  parameters = params.GetParameters()
  if set(gradients.keys()) != set(parameters.keys()):
    raise errors.ShapeError('Gradient names do not match parameter names.')

  for name, value in parameters.items():
    gradient = gradients[name]
    if numpy.shape(gradient) != value.shape:
      raise errors.ShapeError(
          f'Gradient shape: {numpy.shape(gradient)!s} of: {name:s} does not '
          f'match parameter shape: {value.shape!s}.')

    if not numpy.all(numpy.isfinite(gradient)):
      raise errors.NumericError(f'Gradient of: {name:s} is not finite.')

  adam_state = params.adam_state
  adam_state.step += 1

  first_correction = 1.0 - ADAM_BETA1 ** adam_state.step
  second_correction = 1.0 - ADAM_BETA2 ** adam_state.step

  for name, value in parameters.items():
    gradient = numpy.asarray(gradients[name], dtype=numpy.float64)

    first_moment = adam_state.first_moments[name]
    first_moment *= ADAM_BETA1
    first_moment += (1.0 - ADAM_BETA1) * gradient

    second_moment = adam_state.second_moments[name]
    second_moment *= ADAM_BETA2
    second_moment += (1.0 - ADAM_BETA2) * numpy.square(gradient)

    corrected_first = first_moment / first_correction
    corrected_second = second_moment / second_correction

    value -= learning_rate * corrected_first / (
        numpy.sqrt(corrected_second) + ADAM_EPSILON)

  params.version += 1
  return params
