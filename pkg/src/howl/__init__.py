"""Howl: a real-time Werewolf game server where AI players talk out loud."""

__version__ = "0.1.0"
