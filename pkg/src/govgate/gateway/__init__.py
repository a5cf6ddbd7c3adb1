"""HTTP service over sessions, policies, approvals, and traces."""

from govgate.gateway.app import create_app
from govgate.gateway.runtime import GatewayRuntime

__all__ = ["GatewayRuntime", "create_app"]
