# -*- coding: utf-8 -*-
"""Paper and author record files."""

import io
import logging
import math
import os

import pandas

from fairrank import data_types
from fairrank import definitions
from fairrank import errors
from fairrank import file_io


AUTHORS_FILENAME = 'authors.csv'
PAPERS_FILENAME = 'papers.csv'

AUTHOR_COLUMNS = (
    'author_id', 'gender', 'race', 'country_class', 'career_stage', 'h_index')

PAPER_COLUMNS = (
    'paper_id', 'title', 'conference', 'accepted', 'author_ids', 'tier')

AUTHOR_IDS_SEPARATOR = ';'

# Attributes for which paper level shares are reported.
SHARE_ATTRIBUTES = (
    definitions.ATTRIBUTE_GENDER,
    definitions.ATTRIBUTE_RACE,
    definitions.ATTRIBUTE_COUNTRY)


def _ReadTable(path, columns):
  """Reads a CSV table with all values as strings.

  Args:
    path (str): path of the CSV file.
    columns (tuple[str]): expected header columns.

  Returns:
    pandas.DataFrame: table.

  Raises:
    OSError: if the file cannot be opened.
    ParseError: if the file cannot be parsed or the header is not as expected.
  """
  try:
    table = pandas.read_csv(
        path, dtype=str, keep_default_na=False, encoding='utf-8')
  except (pandas.errors.ParserError, pandas.errors.EmptyDataError,
          UnicodeDecodeError) as exception:
    raise errors.ParseError(path, None, None, f'unable to parse: {exception!s}')

  header = tuple(str(column) for column in table.columns)
  if header != columns:
    expected = ','.join(columns)
    raise errors.ParseError(
        path, 1, None, f'unexpected header, expected: {expected:s}')

  return table


def _ParseEnumeration(path, row, column, value, supported_values):
  """Parses an enumeration value.

  Args:
    path (str): path of the CSV file.
    row (int): row number.
    column (str): name of the column.
    value (str): value.
    supported_values (frozenset[str]): supported values.

  Returns:
    str: value.

  Raises:
    ParseError: if the value is not supported.
  """
  if value not in supported_values:
    raise errors.ParseError(
        path, row, column, f'unsupported value: {value!r}')
  return value


def _ParseInteger(path, row, column, value, supported_values):
  """Parses an integer enumeration value.

  Args:
    path (str): path of the CSV file.
    row (int): row number.
    column (str): name of the column.
    value (str): value.
    supported_values (frozenset[int]): supported values.

  Returns:
    int: value.

  Raises:
    ParseError: if the value is not a supported integer.
  """
  try:
    integer = int(value, 10)
  except ValueError:
    integer = None

  if integer not in supported_values:
    raise errors.ParseError(
        path, row, column, f'unsupported value: {value!r}')
  return integer


def _ReadAuthors(path):
  """Reads author records.

  Args:
    path (str): path of authors.csv.

  Returns:
    list[AuthorRecord]: author records in file order.

  Raises:
    ParseError: if a record is not valid.
  """
  authors = []
  author_identifiers = set()

  table = _ReadTable(path, AUTHOR_COLUMNS)
  for index, values in enumerate(table.itertuples(index=False)):
    row = index + 2
    author_id = values.author_id.strip()
    if not author_id:
      raise errors.ParseError(path, row, 'author_id', 'missing identifier')
    if author_id in author_identifiers:
      raise errors.ParseError(
          path, row, 'author_id', f'duplicate identifier: {author_id:s}')

    gender = _ParseInteger(
        path, row, 'gender', values.gender, definitions.GENDERS)
    race = _ParseEnumeration(path, row, 'race', values.race, definitions.RACES)
    country_class = _ParseEnumeration(
        path, row, 'country_class', values.country_class,
        definitions.COUNTRY_CLASSES)
    career_stage = _ParseEnumeration(
        path, row, 'career_stage', values.career_stage,
        frozenset(definitions.CAREER_STAGES))

    try:
      h_index = float(values.h_index)
    except ValueError:
      h_index = math.nan

    if not math.isfinite(h_index) or h_index < 0.0:
      raise errors.ParseError(
          path, row, 'h_index', f'unsupported value: {values.h_index!r}')

    author_identifiers.add(author_id)
    authors.append(data_types.AuthorRecord(
        author_id, gender, race, country_class, career_stage, h_index))

  return authors


def _ReadPapers(path, author_identifiers):
  """Reads paper records.

  Args:
    path (str): path of papers.csv.
    author_identifiers (set[str]): identifiers of the known authors.

  Returns:
    list[PaperRecord]: paper records in file order.

  Raises:
    ParseError: if a record is not valid or references an unknown author.
  """
  papers = []
  paper_identifiers = set()

  table = _ReadTable(path, PAPER_COLUMNS)
  for index, values in enumerate(table.itertuples(index=False)):
    row = index + 2
    paper_id = values.paper_id.strip()
    if not paper_id:
      raise errors.ParseError(path, row, 'paper_id', 'missing identifier')
    if paper_id in paper_identifiers:
      raise errors.ParseError(
          path, row, 'paper_id', f'duplicate identifier: {paper_id:s}')

    conference = _ParseInteger(
        path, row, 'conference', values.conference, definitions.CONFERENCES)
    accepted = _ParseInteger(
        path, row, 'accepted', values.accepted, frozenset([0, 1]))

    author_ids = [
        author_id.strip()
        for author_id in values.author_ids.split(AUTHOR_IDS_SEPARATOR)]
    if not values.author_ids.strip() or not all(author_ids):
      raise errors.ParseError(path, row, 'author_ids', 'missing author')

    for author_id in author_ids:
      if author_id not in author_identifiers:
        raise errors.ParseError(
            path, row, 'author_ids', f'unknown author: {author_id:s}')

    tier = values.tier.strip() or None
    if tier is not None:
      _ParseEnumeration(path, row, 'tier', tier, frozenset(definitions.TIERS))

    paper_identifiers.add(paper_id)
    papers.append(data_types.PaperRecord(
        paper_id, values.title, author_ids, conference, accepted, tier=tier))

  return papers


def LoadRecords(papers_path, authors_path):
  """Loads and validates paper and author records.

  Args:
    papers_path (str): path of papers.csv.
    authors_path (str): path of authors.csv.

  Returns:
    tuple[list[PaperRecord], list[AuthorRecord]]: paper and author records.

  Raises:
    OSError: if a file cannot be opened.
    ParseError: if a record is not valid, an identifier is duplicated or a
        paper references an unknown author.
  """
  authors = _ReadAuthors(authors_path)
  author_identifiers = set(author.author_id for author in authors)
  papers = _ReadPapers(papers_path, author_identifiers)

  logging.debug(
      f'Loaded: {len(papers):d} papers and {len(authors):d} authors.')
  return papers, authors


def _FormatTable(table):
  """Formats a table as CSV.

  Args:
    table (pandas.DataFrame): table.

  Returns:
    str: CSV data.
  """
  output = io.StringIO()
  table.to_csv(output, index=False, lineterminator='\n')
  return output.getvalue()


def WriteRecords(papers, authors, output_directory):
  """Writes paper and author records.

  Args:
    papers (list[PaperRecord]): paper records.
    authors (list[AuthorRecord]): author records.
    output_directory (str): path of the output directory.

  Returns:
    tuple[str, str]: paths of papers.csv and authors.csv.

  Raises:
    OSError: if the files cannot be written.
  """
  file_io.CheckWritableDirectory(output_directory)

  papers_table = pandas.DataFrame(
      [(paper.paper_id, paper.title, paper.conference, paper.accepted,
        AUTHOR_IDS_SEPARATOR.join(paper.author_ids), paper.tier or '')
       for paper in papers], columns=list(PAPER_COLUMNS))

  authors_table = pandas.DataFrame(
      [(author.author_id, author.gender, author.race, author.country_class,
        author.career_stage, author.h_index)
       for author in authors], columns=list(AUTHOR_COLUMNS))

  papers_path = os.path.join(output_directory, PAPERS_FILENAME)
  authors_path = os.path.join(output_directory, AUTHORS_FILENAME)

  file_io.WriteFileAtomically(authors_path, _FormatTable(authors_table))
  file_io.WriteFileAtomically(papers_path, _FormatTable(papers_table))

  return papers_path, authors_path


def GetAuthorsByIdentifier(authors):
  """Indexes author records by identifier.

  Args:
    authors (list[AuthorRecord]): author records.

  Returns:
    dict[str, AuthorRecord]: author records per identifier.
  """
  return {author.author_id: author for author in authors}


def IsPaperProtected(paper, authors_by_identifier, attribute):
  """Determines if a paper belongs to the protected group of an attribute.

  A paper is protected if any of its authors is protected.

  Args:
    paper (PaperRecord): paper record.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    attribute (str): gender, race or country.

  Returns:
    bool: True if the paper is protected on the attribute.
  """
  return any(
      authors_by_identifier[author_id].IsProtected(attribute)
      for author_id in paper.author_ids)


def ProtectedFlags(papers, authors_by_identifier, attribute):
  """Determines the paper level protected flags of an attribute.

  Args:
    papers (list[PaperRecord]): paper records.
    authors_by_identifier (dict[str, AuthorRecord]): author records per
        identifier.
    attribute (str): gender, race or country.

  Returns:
    list[bool]: protected flag per paper.
  """
  return [
      IsPaperProtected(paper, authors_by_identifier, attribute)
      for paper in papers]


def DemographicShares(papers, authors):
  """Computes the realized paper level protected shares.

  Args:
    papers (list[PaperRecord]): paper records.
    authors (list[AuthorRecord]): author records.

  Returns:
    dict[str, float]: protected paper share in percent per attribute.
  """
  if not papers:
    return {attribute: 0.0 for attribute in SHARE_ATTRIBUTES}

  authors_by_identifier = GetAuthorsByIdentifier(authors)
  return {
      attribute: 100.0 * sum(ProtectedFlags(
          papers, authors_by_identifier, attribute)) / len(papers)
      for attribute in SHARE_ATTRIBUTES}
