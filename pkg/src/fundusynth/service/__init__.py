from .app import app, run_degrade, run_eval, run_replay, run_synth

__all__ = ["app", "run_degrade", "run_eval", "run_replay", "run_synth"]
