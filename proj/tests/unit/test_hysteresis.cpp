#include <doctest.h>

#include <random>
#include <vector>

#include "collwarn/hysteresis.hpp"

using namespace collwarn;

namespace {

// Reference machine built on precomputed raw run lengths instead of an online
// counter, used to cross-check the production gate.
std::vector<bool> reference_gate(const std::vector<bool>& raw, int n_on, int n_off) {
    const std::size_t n = raw.size();
    std::vector<int> true_run(n, 0), false_run(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        true_run[i] = raw[i] ? (i > 0 ? true_run[i - 1] : 0) + 1 : 0;
        false_run[i] = raw[i] ? 0 : (i > 0 ? false_run[i - 1] : 0) + 1;
    }
    std::vector<bool> out(n, false);
    bool on = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!on && true_run[i] >= n_on) on = true;
        if (on && false_run[i] >= n_off) on = false;
        out[i] = on;
    }
    return out;
}

std::vector<bool> bits_of(unsigned value, int length) {
    std::vector<bool> raw(length);
    for (int i = 0; i < length; ++i) raw[i] = (value >> i) & 1u;
    return raw;
}

}  // namespace

TEST_CASE("hysteresis basic traces") {
    CHECK(apply_hysteresis({false, false, false}, {1, 1}) ==
          std::vector<bool>{false, false, false});

    // no run of three trues ever completes
    CHECK(apply_hysteresis({true, true, false, true, true, false, true, true, false}, {3, 1}) ==
          std::vector<bool>(9, false));

    // single-frame dropout bridged by n_off = 2
    CHECK(apply_hysteresis({true, true, true, true, false, true, true, true, true}, {1, 2}) ==
          std::vector<bool>(9, true));

    // switch-off happens at the frame completing the clear run
    CHECK(apply_hysteresis({true, false, false, true}, {1, 2}) ==
          std::vector<bool>{true, true, false, true});
}

TEST_CASE("n_on = n_off = 1 reproduces the raw stream") {
    std::mt19937_64 rng(3);
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<bool> raw(40);
        for (auto&& bit : raw) bit = coin(rng);
        CHECK(apply_hysteresis(raw, {1, 1}) == raw);
    }
}

TEST_CASE("hysteresis matches the reference machine exhaustively") {
    for (int n_on = 1; n_on <= 3; ++n_on) {
        for (int n_off = 1; n_off <= 3; ++n_off) {
            for (int length = 0; length <= 12; ++length) {
                for (unsigned value = 0; value < (1u << length); ++value) {
                    const auto raw = bits_of(value, length);
                    CHECK(apply_hysteresis(raw, {n_on, n_off}) ==
                          reference_gate(raw, n_on, n_off));
                }
            }
        }
    }
}

TEST_CASE("output transitions always complete a full raw run") {
    std::mt19937_64 rng(5);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n_on = 1 + static_cast<int>(rng() % 4);
        const int n_off = 1 + static_cast<int>(rng() % 4);
        std::vector<bool> raw(60);
        for (auto&& bit : raw) bit = coin(rng);
        const auto out = apply_hysteresis(raw, {n_on, n_off});
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const bool prev = i > 0 && out[i - 1];
            if (out[i] && !prev) {
                REQUIRE(i + 1 >= static_cast<std::size_t>(n_on));
                for (int k = 0; k < n_on; ++k) CHECK(raw[i - k]);
            }
            if (!out[i] && prev) {
                REQUIRE(i + 1 >= static_cast<std::size_t>(n_off));
                for (int k = 0; k < n_off; ++k) CHECK_FALSE(raw[i - k]);
            }
        }
    }
}

TEST_CASE("idempotence holds for the passthrough-off gate") {
    // With n_off = 1 the output equals its own re-processing. With n_off >= 2
    // the causal switch-off keeps the first n_off - 1 frames of a terminal
    // clear run warned, so re-processing can bridge the shortened gap; the
    // trace below pins that behaviour.
    std::mt19937_64 rng(9);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const HysteresisParams params{1, 1};
        std::vector<bool> raw(48);
        for (auto&& bit : raw) bit = coin(rng);
        const auto once = apply_hysteresis(raw, params);
        CHECK(apply_hysteresis(once, params) == once);
    }

    const std::vector<bool> raw{true, false, false, true};
    const auto once = apply_hysteresis(raw, {1, 2});
    CHECK(once == std::vector<bool>{true, true, false, true});
    CHECK(apply_hysteresis(once, {1, 2}) == std::vector<bool>{true, true, true, true});
}

TEST_CASE("hysteresis params validation") {
    CHECK_THROWS_AS((HysteresisParams{0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((HysteresisParams{1, 0}.validate()), std::invalid_argument);
}
