"""Publication Years
====================
Year maps are two-column TSV files: ``doc_id<TAB>year``.
"""
import logging
import re

from errors import InputError
from .pubtator import MalformedLine

logger = logging.getLogger(__name__)

YEAR = re.compile(r'[0-9]+')


class MissingYear(InputError):
    """A document has no entry in the year map."""
    def __init__(self, doc_id):
        super().__init__('no publication year for document {}'.format(doc_id))
        self.doc_id = doc_id


def read_year_map(stream):
    """Parse year-map TSV text into a dict doc_id -> year.
    Blank lines and lines starting with ``#`` are skipped.
    """
    years = {}
    for line_no, line in enumerate(stream.splitlines(), 1):
        if not line.strip() or line.startswith('#'):
            continue
        fields = line.rstrip('\r\n').split('\t')
        if len(fields) != 2 or not YEAR.fullmatch(fields[1].strip()):
            raise MalformedLine(line_no, line)
        years[fields[0].strip()] = int(fields[1].strip())
    return years


def attach_years(docs, year_map, strict=True, default_year=None):
    """Return `docs` with the year from `year_map` attached.

    Strict mode raises :class:`MissingYear` for the first unmapped document.
    Otherwise unmapped documents get `default_year` and are logged.
    """
    dated, missing = [], []
    for doc in docs:
        year = year_map.get(doc.doc_id)
        if year is None:
            if strict or default_year is None:
                raise MissingYear(doc.doc_id)
            missing.append(doc.doc_id)
            year = default_year
        dated.append(doc.with_year(year))
    if missing:
        logger.warning('%d documents without a year, using %s: %s',
                       len(missing), default_year, ', '.join(missing[:10]))
    return dated
