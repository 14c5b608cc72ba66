# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import logging as _logging
import logging.config as _logging_config


SPEW = 5


_logging.addLevelName(SPEW, "SPEW")


LEVELS = ("spew", "debug", "info", "warning", "error", "critical")


def spewing(logger):
    return logger.isEnabledFor(SPEW)


def configure_logging(level, log_file=None):
    """
    Sends records at level and above to stderr, and to log_file when given.
    Stdout is left to the tables. The root logger is set to level as well, so
    spewing() is only true when SPEW was asked for.
    """
    level = level.upper()
    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "level": level,
            "formatter": "console",
        }
    }
    if log_file:
        handlers["file"] = {
            "class": "logging.handlers.WatchedFileHandler",
            "filename": log_file,
            "level": level,
            "formatter": "console",
        }

    _logging_config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "console": {
                    "class": "logging.Formatter",
                    "style": "{",
                    "format": "[{asctime}] [{levelname:^10}] {message}",
                    "datefmt": "%Y-%m-%d %H:%M:%S",
                }
            },
            "handlers": handlers,
            "root": {"level": level, "handlers": sorted(handlers)},
        }
    )
