"""Flask application factory.

Creates and configures the Flask app, error handlers and the skeleton API
namespace.
"""

import logging
import os

import numpy as np
from flask import Flask
from flask.json.provider import DefaultJSONProvider
from flask_restx import Api

from mlskel import __version__, configure_logging
from mlskel.config.settings import CONFIG_MAP


class NumpyJSONProvider(DefaultJSONProvider):
    """Extend Flask's default JSON provider to handle numpy scalars and arrays."""

    @staticmethod
    def default(o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return DefaultJSONProvider.default(o)


def create_app(config_name: str | None = None) -> Flask:
    """Build and configure the Flask application.

    Args:
        config_name: One of 'development', 'testing', 'production'.
                     Defaults to the MLSKEL_ENV environment variable.
    """
    app = Flask(__name__)
    app.json_provider_class = NumpyJSONProvider
    app.json = NumpyJSONProvider(app)

    # --- Configuration ---
    config_name = config_name or os.getenv("MLSKEL_ENV", "development")
    app.config.from_object(CONFIG_MAP[config_name])

    # --- Logging ---
    configure_logging(app.config["LOG_LEVEL"])

    # --- API ---
    api = Api(
        app,
        title="Multilevel Skeletonization",
        version=__version__,
        description="Curve skeletons of embedded graphs via local separators",
    )

    from mlskel.api.skeletons import ns as skeletons_ns

    api.add_namespace(skeletons_ns, path="/skeletons")

    # --- Global error handler ---
    _register_error_handlers(app)

    return app


def _register_error_handlers(app: Flask) -> None:
    """Map application exceptions to JSON responses."""
    from mlskel.domain.exceptions import SkeletonError
    from mlskel.schemas.response import error_response

    @app.errorhandler(SkeletonError)
    def handle_skeleton_error(error: SkeletonError):
        return error_response(error.message, error.error_code, error.status_code)

    @app.errorhandler(404)
    def handle_not_found(_error):
        return error_response("Resource not found", "NOT_FOUND", 404)

    @app.errorhandler(500)
    def handle_internal(_error):
        logging.getLogger(__name__).exception("Unhandled server error")
        return error_response("Internal server error", "INTERNAL_ERROR", 500)
