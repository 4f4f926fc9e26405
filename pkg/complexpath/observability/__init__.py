from .metrics import metrics_collector, MetricsCollector

__all__ = ["metrics_collector", "MetricsCollector"]
