from graphrl.environments.base import (
    ActionError,
    CommunicationSetting,
    EpisodeError,
    EpisodeStatus,
    GraphEnvironment,
)
from graphrl.environments.generators import (
    GeneratorError,
    GraphGenerator,
    bernoulli,
    fixed,
    from_callback,
    uniform_random,
)
from graphrl.environments.slots import MalformedStateError
from graphrl.environments.linear import LinearBuildEnvironment, LinearFlipEnvironment, LinearSetEnvironment
from graphrl.environments.global_env import GlobalFlipEnvironment, GlobalSetEnvironment
from graphrl.environments.local import LocalFlipEnvironment, LocalSetEnvironment

ENVIRONMENTS = {
    "linear_build": LinearBuildEnvironment,
    "linear_set": LinearSetEnvironment,
    "linear_flip": LinearFlipEnvironment,
    "global_set": GlobalSetEnvironment,
    "global_flip": GlobalFlipEnvironment,
    "local_set": LocalSetEnvironment,
    "local_flip": LocalFlipEnvironment,
}
