"""Hetionet Tables
==================
PubTator types map to Hetionet node types, and each unordered pair of
Hetionet types has a menu of candidate relations.
"""
from corpus import EntityType

TYPE_MATCH = {
    EntityType.GENE: 'genes',
    EntityType.CHEMICAL: 'compounds',
    EntityType.DISEASE: 'diseases',
}
"""PubTator type -> Hetionet type."""

RELATION_CANDIDATES = {
    frozenset(['genes']): ('covaries', 'interacts', 'regulates'),
    frozenset(['diseases']): ('resembles',),
    frozenset(['compounds']): ('resembles',),
    frozenset(['genes', 'diseases']): ('downregulates', 'associates', 'upregulates'),
    frozenset(['genes', 'compounds']): ('binds', 'upregulates', 'downregulates'),
    frozenset(['compounds', 'diseases']): ('treats', 'palliates'),
}
"""Unordered Hetionet type pair -> candidate relations."""

RELATION_MENU = ('covaries', 'interacts', 'regulates', 'resembles', 'downregulates', 'upregulates',
                 'associates', 'binds', 'treats', 'palliates')
"""Every Hetionet relation, in the order the generative prompt offers them."""


def hetionet_type(entity_type):
    """Return the Hetionet type of a PubTator type, or None if unmapped."""
    return TYPE_MATCH.get(entity_type)


def relation_candidates(type_a, type_b):
    """Return the candidate relations for two PubTator types (order-free),
    or () when either type is unmapped.
    """
    a, b = hetionet_type(type_a), hetionet_type(type_b)
    if a is None or b is None:
        return ()
    return RELATION_CANDIDATES.get(frozenset([a, b]), ())
