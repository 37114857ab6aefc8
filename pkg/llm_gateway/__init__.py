from .gateway import BatchAborted, Gateway, Tracer, open_gateway
from .http import API_KEY_VARIABLE, JsonEndpoint, RateLimited, TransportError, api_key
from .providers import CacheMiss, Live, Provider, Record, Replay, Scripted, UnscriptedPrompt
from .request import LlmExchange, LlmRequest, RequestSettings, canonical_json
from .store import ExchangeStore
from .templates import PromptTemplate, templates
