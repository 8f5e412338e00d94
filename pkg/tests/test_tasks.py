"""
Tests for seed derivation and the trial runner.
"""
from awtc.channel import Dmc
from awtc.schema import TailParams
from awtc.softcover import divergence_tail_experiment
from awtc.tasks import derive_seed, run_trials, run_trials_async


def _echo(args):
    payload, seed = args
    return (payload, seed)


def test_derive_seed_is_stable_and_separates_streams():
    assert derive_seed(1, "a", 0) == derive_seed(1, "a", 0)
    seeds = {derive_seed(1, "a", i) for i in range(100)}
    assert len(seeds) == 100
    assert derive_seed(1, "a", 0) != derive_seed(1, "b", 0)
    assert derive_seed(1, "a", 0) != derive_seed(2, "a", 0)


def test_run_trials_passes_payload_and_seed():
    results = run_trials(_echo, 3, seed=4, tag="echo", workers=1, payload="p")
    assert results == [("p", derive_seed(4, "echo", i)) for i in range(3)]


def test_worker_count_does_not_change_results():
    params = TailParams(n=4, keybits=2, k=4, channel=Dmc.bsc(0.2), threshold=0.05)
    serial = divergence_tail_experiment(params, trials=4, seed=3, workers=1)
    pooled = divergence_tail_experiment(params, trials=4, seed=3, workers=2)
    assert serial.divergences == pooled.divergences


async def test_run_trials_async_keeps_trial_order():
    results = await run_trials_async(
        _echo, 5, seed=0, tag="order", workers=2, payload=1
    )
    expected = [derive_seed(0, "order", i) for i in range(5)]
    assert [seed for _, seed in results] == expected
