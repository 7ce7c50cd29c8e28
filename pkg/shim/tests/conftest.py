import socket
import threading
import time

import pytest
import requests
import uvicorn

from modelshim.config import load_shim_config
from modelshim.server import create_app


class RunningShim:
    def __init__(self, config=None):
        self.config = config or load_shim_config(use_local=True)
        self.app = create_app(self.config)
        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            self.port = probe.getsockname()[1]
        self._server = uvicorn.Server(uvicorn.Config(
            self.app, host="127.0.0.1", port=self.port, log_level="error",
        ))
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self):
        self._thread.start()
        deadline = time.time() + 15
        while time.time() < deadline:
            try:
                requests.get(f"{self.base_url}/healthz", timeout=1)
                return self
            except requests.RequestException:
                time.sleep(0.05)
        raise RuntimeError("shim did not come up")

    def stop(self):
        self._server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture(scope="session")
def shim():
    server = RunningShim().start()
    yield server
    server.stop()
