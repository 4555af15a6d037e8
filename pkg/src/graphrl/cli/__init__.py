from graphrl.cli.config import ConfigError, RunConfig, load_config
from graphrl.cli.main import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_TARGET,
    SCORE_LOG_HEADER,
    build_agent,
    build_environment,
    check,
    convert,
    main,
    run,
)
