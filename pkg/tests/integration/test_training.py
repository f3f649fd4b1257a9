import numpy as np

from readout_lab.metatrain import build_sources, evaluate, final_accuracy, get_preset, train
from readout_lab.models import ReadoutKind, TaskKind


def test_bimodal_demo_beats_frozen_prototype_readout():
    """Test training through the ridge head lifts query accuracy past the prototype plateau"""
    config = get_preset("bimodal-demo")
    sources = build_sources(config)

    result = train(config, sources)
    baseline = evaluate(
        None,
        sources,
        ReadoutKind.PROTOTYPE,
        episodes=50,
        K=config.k_range[0],
        Q=config.q_range[0],
        seed=config.seed,
    )

    assert len(result.log) == config.steps
    assert final_accuracy(result.log, window=50) >= 0.85
    assert baseline[TaskKind.NODE] <= 0.72


def test_multi_task_step_visits_every_task():
    """Test three episodes per step cover node, edge and graph tasks with a finite loss"""
    config = get_preset("default").model_copy(
        update={"steps": 2, "episodes_per_step": 3, "k_range": (2, 3), "q_range": (2, 4), "hops": 1}
    )

    result = train(config)

    assert [entry.task for entry in result.log] == [TaskKind.NODE, TaskKind.EDGE, TaskKind.GRAPH] * 2
    assert all(np.isfinite(entry.loss) for entry in result.log)
