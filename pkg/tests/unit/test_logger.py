import json

import structlog

from besselpairs.utils.logger import configure_logging, get_logger, get_run_logger


class TestLibraryDefault:
    def test_unconfigured_logger_is_quiet_and_uses_stderr(self, capsys):
        structlog.reset_defaults()
        try:
            log = get_logger("besselpairs.library")
            log.debug("hidden_event")
            log.info("hidden_event")
            log.warning("shown_event", n=3)
            captured = capsys.readouterr()
        finally:
            configure_logging("WARNING")
        assert captured.out == ""
        assert "hidden_event" not in captured.err
        assert json.loads(captured.err.strip()) == {"event": "shown_event", "n": 3, "level": "warning"}

    def test_run_logger_binds_the_verb(self, capsys):
        structlog.reset_defaults()
        try:
            get_run_logger("table", run_id="fixed").warning("run_failed")
            captured = capsys.readouterr()
        finally:
            configure_logging("WARNING")
        record = json.loads(captured.err.strip())
        assert record["verb"] == "table"
        assert record["run_id"] == "fixed"
