from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import instances
from latesched.ed import ed_schedule
from latesched.kernels import (
    certificate_kernel,
    decompose_kernel,
    delta_min,
    extract_kernels,
    is_regular,
    overflow_jobs,
    regularize,
)
from latesched.model import Instance, Job, canonical_timing, lateness_profile, retime


def test_overflow_fixture_a(inst_a):
    assert overflow_jobs(ed_schedule(inst_a), inst_a) == ["J2"]


def test_overflow_keeps_last_of_run():
    inst = Instance(tuple(Job(f"J{i}", 0, 2 * i, 2, 1) for i in range(1, 5)))
    s = canonical_timing(["J1", "J2", "J3", "J4"], inst)
    assert lateness_profile(s, inst)[0] == {"J1": 0, "J2": 0, "J3": 0, "J4": 0}
    assert overflow_jobs(s, inst) == ["J4"]


def test_overflow_fixture_b_two_blocks(inst_b):
    s = canonical_timing(["J1", "J2", "J3"], inst_b, {"J1": 4})
    assert [s.starts[j] for j in s.sequence] == [0, 2, 9]
    assert overflow_jobs(s, inst_b) == ["J2", "J3"]


def test_kernel_fixture_a(inst_a):
    (k,) = extract_kernels(ed_schedule(inst_a), inst_a)
    assert k.jobs == ("J2",) and k.min_release == 2
    assert k.delaying_emerging == "J1" and k.delta == 8


def test_kernel_fixture_c(inst_c):
    (k,) = extract_kernels(ed_schedule(inst_c), inst_c)
    assert k.job_set == {"I", "J"} and k.overflow == "J"
    assert k.min_release == 2 and k.delaying_emerging == "E" and k.delta == 3


def test_kernel_at_block_start_has_no_emerging_job():
    inst = Instance((Job("A", 0, 3, 3, 1), Job("B", 9, 20, 1, 1)))
    (k,) = extract_kernels(ed_schedule(inst), inst)
    assert k.delaying_emerging is None and k.delta is None
    assert certificate_kernel([k]) is k


def test_delta_min_examples(inst_a, inst_b):
    assert delta_min(ed_schedule(inst_a), inst_a) == 8
    assert delta_min(ed_schedule(inst_b), inst_b) == 5
    single = Instance((Job("A", 4, 3, 3, 1),))
    assert delta_min(ed_schedule(single), single) is None


def test_regularity_examples(inst_a, inst_c):
    (ka,) = extract_kernels(ed_schedule(inst_a), inst_a)
    assert is_regular(ka, ed_schedule(inst_a), inst_a)
    sc = ed_schedule(inst_c)
    (kc,) = extract_kernels(sc, inst_c)
    assert not is_regular(kc, sc, inst_c)


def test_decompose_fixture_c(inst_c):
    result = decompose_kernel(["I", "J"], inst_c)
    assert result.components == ((2, ("J", "I")),)
    assert result.omitted == ()


def test_decompose_single_job(inst_a):
    result = decompose_kernel(["J2"], inst_a)
    assert result.components == ((2, ("J2",)),) and result.omitted == ()


def test_regularize_fixture_c(inst_c):
    reg = regularize(ed_schedule(inst_c), inst_c)
    assert reg.sequence == ("E", "J", "I")
    assert [reg.starts[j] for j in reg.sequence] == [0, 5, 9]
    per_job, worst = lateness_profile(reg, inst_c)
    assert per_job == {"E": -94, "J": -3, "I": 1} and worst == 1
    (k,) = extract_kernels(reg, inst_c)
    assert k.jobs == ("I",) and k.delaying_emerging == "J"
    assert is_regular(k, reg, inst_c)


def test_regularize_keeps_regular_schedule(inst_a):
    s = ed_schedule(inst_a)
    assert regularize(s, inst_a) == s


def _check_kernel_shape(schedule, instance):
    seq = schedule.sequence
    for k in extract_kernels(schedule, instance):
        d_o = instance.job(k.overflow).due
        assert seq[k.last] == k.overflow and seq[k.first : k.last + 1] == k.jobs
        assert all(instance.job(j).due <= d_o for j in k.jobs)
        for a, b in zip(k.jobs, k.jobs[1:]):
            assert schedule.completions[a] == schedule.starts[b]
        assert k.min_release == min(instance.job(j).release for j in k.jobs)
        if k.delaying_emerging is not None:
            e = k.delaying_emerging
            assert k.start > k.min_release
            assert schedule.position(e) < k.first
            assert schedule.completions[e] == k.start
            assert k.delta == schedule.completions[e] - k.min_release
        else:
            assert k.delta is None


@settings(max_examples=300, deadline=None)
@given(instances(max_jobs=8))
def test_kernel_shape_on_ed_and_regularized(inst):
    sigma = ed_schedule(inst)
    _check_kernel_shape(sigma, inst)
    # in an ED schedule a late-starting kernel always has a job right before it
    for k in extract_kernels(sigma, inst):
        assert (k.delaying_emerging is None) == (k.start == k.min_release)
    _check_kernel_shape(regularize(sigma, inst), inst)


@settings(max_examples=300, deadline=None)
@given(instances(max_jobs=8))
def test_regularized_kernels_are_regular(inst):
    reg = regularize(ed_schedule(inst), inst)
    assert sorted(reg.sequence) == sorted(inst.ids)
    for k in extract_kernels(reg, inst):
        if k.delaying_emerging is not None:
            assert is_regular(k, reg, inst)


@settings(max_examples=300, deadline=None)
@given(instances(max_jobs=8), st.data())
def test_decomposition_partitions_kernel(inst, data):
    sigma = ed_schedule(inst)
    for k in extract_kernels(sigma, inst):
        result = decompose_kernel(k.jobs, inst)
        placed = result.jobs
        assert not set(placed) & set(result.omitted)
        assert sorted(placed + list(result.omitted)) == sorted(k.jobs)


@settings(max_examples=300, deadline=None)
@given(instances(max_jobs=8), st.data())
def test_discompressing_regular_kernel_costs_at_most_tau(inst, data):
    sigma = regularize(ed_schedule(inst), inst)
    kernels = [k for k in extract_kernels(sigma, inst) if k.delaying_emerging]
    if not kernels:
        return
    k = data.draw(st.sampled_from(kernels))
    e = k.delaying_emerging
    x = {**sigma.compression, e: min(inst.job(e).base_processing, k.delta)}
    compressed = retime(sigma, inst, x)
    tau = data.draw(st.integers(0, x[e]))
    relaxed = retime(compressed, inst, {**x, e: x[e] - tau})
    before = lateness_profile(compressed, inst)[0][k.overflow]
    after = lateness_profile(relaxed, inst)[0][k.overflow]
    assert 0 <= after - before <= tau
