from graphrl.agents.nn import Adam, LayerSpec, Network, mlp_specs
from graphrl.agents.policy import (
    MASKED_LOGIT,
    cross_entropy_loss,
    discounted_returns,
    masked_log_probs,
    masked_probs,
    masked_sample,
    ppo_policy_loss,
    reinforce_loss,
    uniform_masked_sample,
    value_loss,
)
from graphrl.agents.random_actions import (
    ConstantProbability,
    ExponentialDecay,
    LinearDecay,
    RandomActionMechanism,
)
from graphrl.agents.base import GraphAgent, Rollout
from graphrl.agents.dce import DeepCrossEntropyAgent
from graphrl.agents.pg import PPOAgent, ReinforceAgent

AGENTS = {
    "dce": DeepCrossEntropyAgent,
    "reinforce": ReinforceAgent,
    "ppo": PPOAgent,
}
