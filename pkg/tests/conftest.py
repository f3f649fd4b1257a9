import pytest
from loguru import logger


class LoguruCapture:
    """Collects formatted loguru messages for assertions."""

    def __init__(self):
        self.messages = []

    def write(self, message):
        self.messages.append(str(message))

    @property
    def text(self) -> str:
        return "".join(self.messages)


@pytest.fixture
def caplog_loguru():
    capture = LoguruCapture()
    handler_id = logger.add(capture.write, level="DEBUG", format="{level} {message}")
    yield capture
    logger.remove(handler_id)
