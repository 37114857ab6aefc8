from .graph import DIRECTIONS, KnowledgeGraph, Node, UnknownNode, deduplicate
from .triples import InvalidTriple, Method, Triple, display_name, normalize_name
from .tsv import HEADER, MalformedRow, parse_kg, read_kg, serialize_kg, write_kg
