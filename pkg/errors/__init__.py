from .errors import DalkError, InputError, ProviderError
