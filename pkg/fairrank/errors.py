# -*- coding: utf-8 -*-
"""The error objects."""


class Error(Exception):
  """The error interface."""


class ConfigReaderError(Error):
  """Error that is raised by the configuration reader.

  Attributes:
    key (str): name of the configuration key or section.
    message (str): error message.
  """

  def __init__(self, key: 'str', message: 'str') -> 'None':
    """Initializes an error.

    Args:
      key (str): name of the configuration key or section.
      message (str): error message.
    """
    super(ConfigReaderError, self).__init__(f'{key!s}: {message:s}')
    self.key: 'str' = key
    self.message: 'str' = message


class ConfigurationError(Error):
  """Error that is raised when a configuration value is invalid."""


class DegenerateBatchError(Error):
  """Error that is raised when a batch is too small for batch statistics."""


class EmptyGroupError(Error):
  """Error that is raised when a fairness group contains no elements."""


class FormatError(Error):
  """Error that is raised when a definition format is incorrect."""


class InvariantError(Error):
  """Error that is raised when an internal invariant does not hold."""


class NumericError(Error):
  """Error that is raised when a value is not finite."""


class ParseError(Error):
  """Error that is raised when a record file cannot be parsed.

  Attributes:
    column (str): name of the column or None if not applicable.
    message (str): error message.
    path (str): path of the file.
    row (int): row number, where the header is row 1, or None.
  """

  def __init__(
      self, path: 'str', row: 'int', column: 'str', message: 'str') -> 'None':
    """Initializes an error.

    Args:
      path (str): path of the file.
      row (int): row number, where the header is row 1, or None.
      column (str): name of the column or None if not applicable.
      message (str): error message.
    """
    location = f'{path!s}'
    if row is not None:
      location = f'{location:s} row: {row:d}'
    if column:
      location = f'{location:s} column: {column:s}'

    super(ParseError, self).__init__(f'{location:s} {message:s}')
    self.column: 'str' = column
    self.message: 'str' = message
    self.path: 'str' = path
    self.row: 'int' = row


class ShapeError(Error):
  """Error that is raised when array dimensions do not match."""


class UndefinedGainError(Error):
  """Error that is raised when a gain is undefined for a zero baseline."""
