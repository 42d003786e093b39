"""Python access to the CB2 game engine.

Maps, states, observations, actions and events are plain dicts in the same
shape as the JSON used on the wire and in archives.
"""

import json
from typing import Callable, Optional

from . import _core

GameSetupError = _core.GameSetupError
InfeasibleConfig = _core.InfeasibleConfig
ReplayError = _core.ReplayError

__all__ = [
    "AgentEnv",
    "GameSetupError",
    "InfeasibleConfig",
    "LocalGame",
    "ReplayError",
    "decode_message",
    "default_game_config",
    "default_gen_config",
    "generate_map",
    "is_valid_set",
    "play_local",
    "replay",
    "selfplay",
    "state_hash",
    "validate_map",
]


def _dumps(value) -> str:
    return json.dumps(value, separators=(",", ":"))


def default_game_config() -> dict:
    return json.loads(_core.default_game_config())


def default_gen_config() -> dict:
    return json.loads(_core.default_gen_config())


def _game_config(overrides: Optional[dict]) -> dict:
    return {**default_game_config(), **(overrides or {})}


def generate_map(seed: int = 0, **overrides) -> dict:
    """Generates a map; keyword arguments override generator settings."""
    gen = {**default_gen_config(), **overrides, "seed": seed}
    return json.loads(_core.generate_map(_dumps(gen)))


def validate_map(game_map: dict, expected_card_count: Optional[int] = None) -> list:
    """Returns the list of failed checks; empty means valid."""
    return _core.validate_map(_dumps(game_map), expected_card_count)


def is_valid_set(faces: list) -> bool:
    return _core.is_valid_set(_dumps(faces))


def play_local(game_map: dict, config: Optional[dict] = None, seed: Optional[int] = None, capture: bool = True) -> dict:
    """Scripted leader and follower bots play one game in-process."""
    if seed is None:
        seed = game_map["seed"]
    return json.loads(_core.play_local(_dumps(game_map), _dumps(_game_config(config)), seed, capture))


def selfplay(games: int, seed: int = 0, config: Optional[dict] = None, capture: bool = False, **mapgen) -> list:
    """Game i is played on the map generated with seed + i."""
    results = []
    for i in range(games):
        game_map = generate_map(seed + i, **mapgen)
        result = play_local(game_map, config, capture=capture)
        result["map_seed"] = seed + i
        results.append(result)
    return results


def replay(events: list) -> dict:
    """Folds a log (starting with GameStart) into the state it describes."""
    return json.loads(_core.replay(_dumps(events)))


def state_hash(state: dict) -> str:
    return _core.state_hash(_dumps(state))


def decode_message(text: str) -> dict:
    """Parses a wire message; raises ValueError with the error code."""
    return json.loads(_core.decode_message(text))


class LocalGame:
    """In-process game without networking. Both roles act through apply()."""

    def __init__(self, game_map: dict, config: Optional[dict] = None, seed: Optional[int] = None):
        if seed is None:
            seed = game_map["seed"]
        self._game = _core.LocalGame(_dumps(game_map), _dumps(_game_config(config)), seed)

    def apply(self, role: str, action: dict) -> dict:
        return json.loads(self._game.apply(role, _dumps(action)))

    def state(self) -> dict:
        return json.loads(self._game.state())

    def observe(self, role: str) -> dict:
        return json.loads(self._game.observe(role))

    def events(self) -> list:
        return json.loads(self._game.events())

    def legal_actions(self, role: str) -> list:
        return json.loads(self._game.legal_actions(role))


class AgentEnv:
    """One controlled role; the partner is the scripted bot unless a policy
    (observation dict -> action dict) is given. Reward is the score delta."""

    def __init__(
        self,
        game_map: dict,
        role: str = "follower",
        config: Optional[dict] = None,
        seed: Optional[int] = None,
        partner: Optional[Callable[[dict], dict]] = None,
    ):
        if seed is None:
            seed = game_map["seed"]
        wrapped = None
        if partner is not None:
            wrapped = lambda obs: _dumps(partner(json.loads(obs)))  # noqa: E731
        self._env = _core.AgentEnv(_dumps(game_map), _dumps(_game_config(config)), seed, role, wrapped)

    def reset(self) -> dict:
        return json.loads(self._env.reset())

    def step(self, action: dict):
        """Returns (observation, reward, done, info) with info["rejection"]."""
        out = json.loads(self._env.step(_dumps(action)))
        return out["observation"], out["reward"], out["done"], {"rejection": out["rejection"]}

    def state(self) -> dict:
        return json.loads(self._env.state())
