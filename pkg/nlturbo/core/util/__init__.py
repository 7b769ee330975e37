from .misc import MetricKind, ChannelKind, Algorithm, StopReason, ExitCode, rng_stream
from .worker import Worker
