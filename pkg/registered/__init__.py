from .registered import Registered, UnknownName
