from .pubtator import (AnnotatedDocument, DuplicateDocId, EntityMention, EntityType, MalformedLine,
                       MentionMismatch, OffsetOutOfRange, OtherType, PubTatorParser, collapse,
                       normalize_pubtator, parse_pubtator, serialize_pubtator)
from .years import MissingYear, attach_years, read_year_map
