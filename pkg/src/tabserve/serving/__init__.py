from .batching import BatcherConfig, InferenceRequest, QueuedItem, RequestQueue, Ticket
from .lifecycle import DRAINING, LOADING, UNLOADED, WARM, FunctionLifecycle, ProbeStatus
from .service import InferenceService
from .http_api import ServingApp
from .simulation import simulate_cold_fraction

__all__ = [
    "InferenceRequest", "BatcherConfig", "RequestQueue", "Ticket", "QueuedItem",
    "FunctionLifecycle", "ProbeStatus", "UNLOADED", "LOADING", "WARM", "DRAINING",
    "InferenceService", "ServingApp", "simulate_cold_fraction",
]
