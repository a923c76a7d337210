#!/usr/bin/env python
# -*- coding: utf-8 -*-
# pylint: disable=invalid-name
"""Script to generate corpora and run fairness-aware selection experiments."""

import sys

from fairrank import cli


if __name__ == '__main__':
  sys.exit(cli.Main())
