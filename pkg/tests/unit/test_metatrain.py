import numpy as np
import pytest
from pydantic import ValidationError as ConfigValidationError

from readout_lab.episodes import sample_node_episode
from readout_lab.errors import ParameterError, ValidationError
from readout_lab.graphkit import generate_sbm
from readout_lab.metatrain import (
    AdamW,
    build_sources,
    clip_by_global_norm,
    cosine_lr,
    dump_checkpoint,
    dump_matrices,
    encode_array,
    episode_loss,
    evaluate,
    final_accuracy,
    get_preset,
    global_norm,
    init_encoder,
    log_frame,
    loss_and_grads,
    parse_checkpoint,
    prepare_graph,
    train,
)
from readout_lab.models import EncoderVariant, ReadoutKind, TaskKind, TrainConfig
from readout_lab.numcore import Tape, grad_check


@pytest.fixture
def small_config():
    return TrainConfig(
        steps=3,
        lr=1e-2,
        dropout=0.0,
        variant=EncoderVariant.MLP,
        source="bimodal",
        task_weights={TaskKind.NODE: 1.0},
        d_in=4,
        d_z=8,
        hops=0,
        k_range=(2, 3),
        q_range=(2, 3),
        log_every=1,
    )


@pytest.fixture
def sbm_stack():
    graph = generate_sbm(30, [10, 10, 10], 0.5, 0.05, seed=0)
    return graph, prepare_graph(graph, d_in=4, hops=2, seed=0)


def test_meta_gradient_matches_finite_differences(sbm_stack):
    """Test encoder gradients through the ridge solve against central differences"""
    graph, stack = sbm_stack
    params = init_encoder(EncoderVariant.HOP_ATTENTION, d_in=4, d_z=8, hops=2, dropout=0.0, seed=1)
    episode = sample_node_episode(graph, K=4, Q=4, seed=2)
    names = list(params.weights)

    def program(tape, variables):
        bound = dict(zip(names, variables))
        return episode_loss(tape, params, bound, episode, stack, ridge_lambda=1.0).loss

    assert episode.C == 3
    assert grad_check(program, [params.weights[name] for name in names]) <= 1e-6


def test_loss_and_grads_cover_every_weight(sbm_stack):
    """Test one gradient per encoder weight with matching shapes"""
    graph, stack = sbm_stack
    params = init_encoder(EncoderVariant.HOP_ATTENTION, d_in=4, d_z=8, hops=2, seed=0)
    episode = sample_node_episode(graph, K=2, Q=3, seed=0)

    result, grads = loss_and_grads(params, episode, stack, ridge_lambda=10.0)

    assert set(grads) == set(params.weights)
    assert all(grads[name].shape == value.shape for name, value in params.weights.items())
    assert np.isfinite(result.value)
    assert 0.0 <= result.query_accuracy <= 1.0


def test_label_smoothing_targets():
    """Test the smoothed loss mixes the one-hot target with the uniform one"""
    logits = np.array([[2.0, 0.0]])
    log_probs = logits - np.log(np.exp(logits).sum())
    tape = Tape()

    loss = tape.softmax_cross_entropy(tape.constant(logits), np.array([[1.0, 0.0]]), smoothing=0.1)

    expected = -(0.95 * log_probs[0, 0] + 0.05 * log_probs[0, 1])
    assert float(loss.value[0, 0]) == pytest.approx(expected)


def test_cosine_lr_endpoints():
    """Test the schedule starts at the base rate and anneals to zero"""
    assert cosine_lr(0, 100, 0.1) == pytest.approx(0.1)
    assert cosine_lr(50, 100, 0.1) == pytest.approx(0.05)
    assert cosine_lr(100, 100, 0.1) == pytest.approx(0.0, abs=1e-15)
    assert cosine_lr(70, 100, 0.1, schedule="constant") == 0.1


def test_cosine_lr_rejects_unknown_schedule():
    """Test only cosine and constant schedules exist"""
    with pytest.raises(ParameterError):
        cosine_lr(0, 10, 0.1, schedule="linear")


def test_clip_by_global_norm():
    """Test clipping rescales jointly to the maximum norm"""
    grads = {"a": 3.0 * np.ones((2, 2)), "b": np.zeros((1, 3))}

    clipped, norm = clip_by_global_norm(grads, 1.0)

    assert norm == pytest.approx(6.0)
    assert global_norm(clipped) <= 1.0 + 1e-9
    np.testing.assert_allclose(clipped["a"], 0.5 * np.ones((2, 2)))


def test_clip_keeps_small_gradients():
    """Test gradients under the limit pass unchanged"""
    grads = {"a": np.full((1, 1), 0.5)}

    clipped, _ = clip_by_global_norm(grads, 1.0)

    assert clipped is grads


def test_adamw_zero_lr_leaves_params():
    """Test lr = 0 changes nothing, weight decay included"""
    params = {"w": np.array([[1.0, -2.0]])}

    updated = AdamW(weight_decay=0.1).step(params, {"w": np.array([[0.3, 0.4]])}, lr=0.0)

    np.testing.assert_array_equal(updated["w"], params["w"])


def test_adamw_first_step_moves_by_lr():
    """Test the bias-corrected first step is lr times the gradient sign"""
    params = {"w": np.array([[1.0, -2.0]])}

    updated = AdamW(weight_decay=0.0).step(params, {"w": np.array([[0.3, -0.4]])}, lr=0.01)

    np.testing.assert_allclose(updated["w"], [[0.99, -1.99]], atol=1e-7)


def test_adamw_applies_decoupled_weight_decay():
    """Test a zero gradient still shrinks weights by lr * weight_decay"""
    params = {"w": np.array([[2.0]])}

    updated = AdamW(weight_decay=0.5).step(params, {}, lr=0.1)

    np.testing.assert_allclose(updated["w"], [[1.9]])


def test_init_encoder_shapes():
    """Test hop attention holds one projection per hop and a query map"""
    params = init_encoder(EncoderVariant.HOP_ATTENTION, d_in=5, d_z=6, hops=3, seed=0)

    assert (params.d_in, params.d_z, params.hops) == (5, 6, 3)
    assert params.weights["query_W"].shape == (6, 6)
    assert params.weights["proj_3_b"].shape == (1, 6)
    assert np.all(np.abs(params.weights["proj_0_W"]) <= 1.0 / np.sqrt(5))


def test_init_encoder_rejects_bad_dropout():
    """Test dropout must lie in [0, 1)"""
    with pytest.raises(ParameterError):
        init_encoder(EncoderVariant.MLP, d_in=2, d_z=2, dropout=1.0)


def test_encode_rejects_width_mismatch(sbm_stack):
    """Test the hop stack width must equal d_in"""
    _, stack = sbm_stack
    params = init_encoder(EncoderVariant.MLP, d_in=3, d_z=4, hops=0)

    with pytest.raises(ParameterError):
        encode_array(params, stack)


def test_mlp_encoder_is_projection_plus_residual_three_layer_mlp(sbm_stack):
    """Test the MLP variant is proj_0 followed by x + a 3-layer ReLU MLP"""
    _, stack = sbm_stack
    params = init_encoder(EncoderVariant.MLP, d_in=4, d_z=8, hops=0, dropout=0.0, seed=2)
    w = {name: value.copy() for name, value in params.weights.items()}
    for layer in (1, 2, 3):
        w[f"mlp_{layer}_b"] += 0.1 * layer

    assert sorted(name for name in w if name.endswith("_W")) == ["mlp_1_W", "mlp_2_W", "mlp_3_W", "proj_0_W"]
    x = stack.hops[0] @ w["proj_0_W"] + w["proj_0_b"]
    h = np.maximum(x @ w["mlp_1_W"] + w["mlp_1_b"], 0.0)
    h = np.maximum(h @ w["mlp_2_W"] + w["mlp_2_b"], 0.0)
    h = h @ w["mlp_3_W"] + w["mlp_3_b"]
    np.testing.assert_allclose(encode_array(params._replace(weights=w), stack), x + h, atol=1e-12)


def test_encode_array_shape(sbm_stack):
    """Test evaluation embeddings have one d_z row per node"""
    graph, stack = sbm_stack
    params = init_encoder(EncoderVariant.HOP_ATTENTION, d_in=4, d_z=8, hops=2)

    Z = encode_array(params, stack)

    assert Z.shape == (graph.n, 8)
    assert np.all(np.isfinite(Z))


def test_checkpoint_round_trip():
    """Test weights, variant, dropout and metadata survive serialization"""
    params = init_encoder(EncoderVariant.HOP_ATTENTION, d_in=3, d_z=4, hops=1, dropout=0.2, seed=5)

    loaded, metadata = parse_checkpoint(dump_checkpoint(params, {"seed": 5}))

    assert loaded.variant == EncoderVariant.HOP_ATTENTION
    assert loaded.dropout == 0.2
    assert metadata["seed"] == 5
    assert list(loaded.weights) == list(params.weights)
    for name, value in params.weights.items():
        np.testing.assert_array_equal(loaded.weights[name], value)


def test_checkpoint_is_byte_deterministic():
    """Test identical parameters serialize to identical bytes"""
    params = init_encoder(EncoderVariant.MLP, d_in=3, d_z=4, hops=0, seed=1)

    assert dump_checkpoint(params, {"b": 1, "a": 2}) == dump_checkpoint(params.copy(), {"a": 2, "b": 1})


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda data: b"XXXXX" + data[5:],
        lambda data: data[:-1],
        lambda data: data + b"\x00",
        lambda data: data[:9],
    ],
)
def test_parse_checkpoint_rejects_corruption(corrupt):
    """Test bad magic, truncation and trailing bytes are validation errors"""
    data = dump_checkpoint(init_encoder(EncoderVariant.MLP, d_in=2, d_z=2, hops=0))

    with pytest.raises(ValidationError):
        parse_checkpoint(corrupt(data))


def test_parse_checkpoint_requires_encoder_metadata():
    """Test a bare matrix payload is not a checkpoint"""
    with pytest.raises(ValidationError):
        parse_checkpoint(dump_matrices({"embeddings": np.ones((2, 2))}))


def test_dump_matrices_rejects_vectors():
    """Test only 2-D matrices can be stored"""
    with pytest.raises(ValidationError):
        dump_matrices({"v": np.ones(3)})


def test_presets():
    """Test named presets resolve and unknown names are rejected"""
    demo = get_preset("bimodal-demo")

    assert demo.source == "bimodal"
    assert demo.task_kinds == [TaskKind.NODE]
    assert get_preset("default") == TrainConfig()
    with pytest.raises(ParameterError):
        get_preset("missing")


def test_train_config_rejects_inverted_ranges():
    """Test shot ranges must be ordered"""
    with pytest.raises(ConfigValidationError):
        TrainConfig(k_range=(4, 2))


def test_train_with_zero_steps_returns_initialization(small_config):
    """Test no steps leaves the initial parameters and an empty log"""
    result = train(small_config.model_copy(update={"steps": 0}))

    assert result.log == []
    for name, value in result.initial.weights.items():
        np.testing.assert_array_equal(result.params.weights[name], value)
    assert np.isnan(final_accuracy(result.log))


def test_train_is_deterministic(small_config):
    """Test two runs with one seed give identical weights and logs"""
    first = train(small_config)
    second = train(small_config)

    assert [entry.loss for entry in first.log] == [entry.loss for entry in second.log]
    for name, value in first.params.weights.items():
        np.testing.assert_array_equal(second.params.weights[name], value)


def test_train_log_frame(small_config):
    """Test one log row per episode with the documented columns"""
    result = train(small_config)

    frame = log_frame(result.log)

    assert list(frame.columns) == ["step", "task", "loss", "query_acc", "lr"]
    assert frame["step"].tolist() == [0, 1, 2]
    assert set(frame["task"]) == {"node"}
    assert frame["lr"].iloc[0] == pytest.approx(1e-2)


def test_train_updates_parameters(small_config):
    """Test a positive learning rate moves the weights"""
    result = train(small_config)

    moved = [
        not np.array_equal(result.params.weights[name], value) for name, value in result.initial.weights.items()
    ]
    assert any(moved)


def test_train_rejects_missing_sources(small_config):
    """Test every configured task needs a source"""
    config = small_config.model_copy(update={"task_weights": {TaskKind.NODE: 1.0, TaskKind.EDGE: 1.0}})

    with pytest.raises(ParameterError):
        train(config, sources=build_sources(small_config))


def test_evaluate_frozen_features(small_config):
    """Test evaluation returns an accuracy per task and rejects zero episodes"""
    sources = build_sources(small_config)

    scores = evaluate(None, sources, ReadoutKind.PROTOTYPE, episodes=3, K=2, Q=2)

    assert set(scores) == {TaskKind.NODE}
    assert 0.0 <= scores[TaskKind.NODE] <= 1.0
    with pytest.raises(ParameterError):
        evaluate(None, sources, episodes=0)
