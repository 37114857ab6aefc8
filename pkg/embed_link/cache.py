"""Node Embeddings
==================
Embeddings of every node name of a graph snapshot, computed once per
(snapshot id, provider id) and optionally persisted as JSON lines
``{"name": ..., "vector": [...]}``.
"""
import json
import logging
import os
import threading
from collections import OrderedDict

import numpy as np

from errors import InputError

logger = logging.getLogger(__name__)


class NodeEmbeddings:
    """A matrix of node-name vectors, rows in sorted node-id order."""

    MEMO_SIZE = 4
    """Snapshots whose embeddings are kept in memory."""

    _memo = OrderedDict()
    _pending = {}
    _lock = threading.Lock()

    def __init__(self, node_ids, names, matrix):
        self.node_ids, self.names = list(node_ids), list(names)
        self.matrix = np.asarray(matrix, dtype=float).reshape(len(self.node_ids), -1)
        self.norms = np.linalg.norm(self.matrix, axis=1) if len(self.node_ids) else np.zeros(0)
        self.rows = {node: row for row, node in enumerate(self.node_ids)}

    def vector(self, node):
        return self.matrix[self.rows[node]]

    @classmethod
    def compute(cls, graph, embedder):
        node_ids = graph.node_ids
        names = [graph.name(node) for node in node_ids]
        logger.info('embedding %d node names with %s', len(names), embedder.provider_id)
        return cls(node_ids, names, embedder.embed(names) if names else [])

    @classmethod
    def for_graph(cls, graph, embedder, directory=None):
        """Return the embeddings of `graph`'s nodes, from memory, from
        `directory`, or computed (and saved to `directory`). Only the
        `MEMO_SIZE` most recently used snapshots stay in memory.
        """
        key = (graph.snapshot_id, embedder.provider_id)
        with cls._lock:
            if key in cls._memo:
                cls._memo.move_to_end(key)
                return cls._memo[key]
            pending = cls._pending.setdefault(key, threading.Lock())
        # Other keys compute concurrently; the same key computes once.
        with pending:
            with cls._lock:
                if key in cls._memo:
                    return cls._memo[key]
            try:
                embeddings = cls.fetch(graph, embedder, key, directory)
                with cls._lock:
                    cls._memo[key] = embeddings
                    while len(cls._memo) > cls.MEMO_SIZE:
                        evicted, _ = cls._memo.popitem(last=False)
                        logger.debug('evicted node embeddings of snapshot %s', evicted[0][:12])
            finally:
                with cls._lock:
                    cls._pending.pop(key, None)
            return embeddings

    @classmethod
    def fetch(cls, graph, embedder, key, directory=None):
        path = os.path.join(directory, '{}-{}.jsonl'.format(key[0][:16], key[1])) if directory else None
        if path and os.path.exists(path):
            return cls.load(path, graph)
        embeddings = cls.compute(graph, embedder)
        if path:
            embeddings.save(path)
        return embeddings

    def save(self, path):
        os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
        with open(path, 'w', encoding='utf-8') as fp:
            for name, vector in zip(self.names, self.matrix):
                fp.write(json.dumps({'name': name, 'vector': vector.tolist()}, ensure_ascii=False) + '\n')

    @classmethod
    def load(cls, path, graph):
        with open(path, encoding='utf-8') as fp:
            rows = [json.loads(line) for line in fp if line.strip()]
        names = [row['name'] for row in rows]
        if names != [graph.name(node) for node in graph.node_ids]:
            raise InputError('{}: cached names do not match the graph'.format(path))
        logger.info('loaded %d node embeddings from %s', len(rows), path)
        return cls(graph.node_ids, names, [row['vector'] for row in rows])

    @classmethod
    def clear(cls):
        with cls._lock:
            cls._memo.clear()
