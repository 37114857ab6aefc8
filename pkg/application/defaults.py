"""Default Configuration
========================
Every option may be overridden, in increasing precedence, by a TOML config
file, a ``DALK_<OPTION>`` environment variable, or a ``--option-name`` flag.
The API key is read from ``DALK_API_KEY`` only.
"""

PROVIDER_MODE = 'live'
"""How model calls are served: live, replay, scripted or record."""

BASE_URL = 'https://api.openai.com/v1'
"""Base URL of the chat-completion and embeddings endpoints."""

MODEL = 'gpt-3.5-turbo'
"""Chat model name; part of every cache key."""

EMBEDDING_MODE = 'hashed'
"""Entity embedder: hashed (offline, deterministic) or live."""

EMBEDDING_MODEL = 'text-embedding-3-small'
"""Model name for live embeddings."""

EMBEDDING_DIM = 256
"""Dimension of hashed embeddings."""

TEMPERATURE = 0.7
"""Sampling temperature of every prompt stage."""

MAX_TOKENS = 1024
"""Completion length limit."""

CONCURRENCY = 4
"""Most model calls in flight at once."""

RETRY_ATTEMPTS = 3
"""Attempts per live call before a transport error surfaces."""

RETRY_BACKOFF = 1.0
"""Seconds before the first retry; doubled for each further one."""

TIMEOUT = 60.0
"""Seconds to wait for one live response."""

CACHE = ''
"""Record/replay store (JSON lines); required for replay and record."""

SCRIPT = ''
"""Scripted-model rules file (JSON); required for scripted mode."""

HOP_BOUND = 2
"""Most hops between consecutive seeds in path exploration."""

RELEVANCE_THRESHOLD = 0.5
"""Question similarity a neighbor needs to be expanded."""

MAX_TRIPLES = 40
"""Most triples kept per evidence subgraph."""

RETRIEVE_K = 5
"""Most triples the model keeps when reranking a subgraph."""

MIN_SIMILARITY = -1.0
"""Entity links below this similarity are dropped (-1 keeps every link)."""

JOINT_RERANK = False
"""Rerank both evidence families in one call."""

ENTITY_SCOPE = 'full'
"""Question text shown to entity extraction and reranking: full or stem."""

PROMPT_SCOPE = 'abstract'
"""Document text shown to relation extraction: abstract or full."""

DEFAULT_YEAR = 2011
"""Year given to documents missing from the year map when not strict."""

STRICT = False
"""Fail on malformed annotations and unmapped documents instead of skipping."""

KEYWORDS = ['Aging', 'Alzheimer', 'Amyloid beta', 'APOE', 'Dementia', 'Lipoprotein', 'Microglia']
"""Domain keywords for benchmark filtering and leave-one-out."""

SWEEP_KS = [1, 3, 5, 10, 20, 30]
"""retrieve_k values of the sweep."""

YEARS = list(range(2011, 2022))
"""Snapshot years of the evolution curve."""

LOG_LEVEL = 'INFO'
"""Logging threshold."""

PROMPT_DIR = ''
"""Directory of prompt files replacing the bundled ones."""
