# -*- coding: utf-8 -*-
"""Atomic file output helpers."""

import os
import tempfile


def CheckWritableDirectory(path):
  """Checks that a directory can be created and written to.

  Args:
    path (str): path of the directory.

  Raises:
    OSError: if the directory cannot be created or is not writable.
  """
  os.makedirs(path, exist_ok=True)
  if not os.path.isdir(path):
    raise NotADirectoryError(f'Not a directory: {path:s}')

  if not os.access(path, os.W_OK | os.X_OK):
    raise PermissionError(f'Directory is not writable: {path:s}')


def WriteFileAtomically(path, data):
  """Writes a file atomically.

  The data is written to a temporary file in the same directory that replaces
  the destination once complete, so an interrupted write leaves no partial
  file under the destination name.

  Args:
    path (str): path of the file.
    data (str|bytes): data to write, text is encoded in UTF-8.

  Raises:
    OSError: if the file cannot be written.
  """
  if isinstance(data, str):
    data = data.encode('utf-8')

  directory = os.path.dirname(os.path.abspath(path))
  file_descriptor, temporary_path = tempfile.mkstemp(
      dir=directory, prefix='.', suffix='.tmp')
  try:
    with os.fdopen(file_descriptor, 'wb') as file_object:
      file_object.write(data)
    os.replace(temporary_path, path)

  except BaseException:
    if os.path.exists(temporary_path):
      os.remove(temporary_path)
    raise
