#pragma once

#include <stdexcept>
#include <vector>

namespace collwarn {

/// Warning debounce: n_on consecutive raw warn frames are required before the
/// output switches on, and n_off consecutive clear frames before it switches
/// off again. Gaps shorter than n_off stay covered by the warning.
struct HysteresisParams {
    int n_on = 2;
    int n_off = 6;

    void validate() const {
        if (n_on < 1) throw std::invalid_argument("n_on must be >= 1");
        if (n_off < 1) throw std::invalid_argument("n_off must be >= 1");
    }
};

/// Online two-state gate, one instance per object id. Causal: the output
/// turns on only at the frame that completes the n_on run, and off only at
/// the frame that completes the n_off run.
class HysteresisGate {
  public:
    explicit HysteresisGate(const HysteresisParams& params) : params_(params) {
        params_.validate();
    }

    bool step(bool raw) {
        if (!on_) {
            run_ = raw ? run_ + 1 : 0;
            if (run_ >= params_.n_on) {
                on_ = true;
                run_ = 0;
            }
        } else {
            run_ = raw ? 0 : run_ + 1;
            if (run_ >= params_.n_off) {
                on_ = false;
                run_ = 0;
            }
        }
        return on_;
    }

  private:
    HysteresisParams params_;
    bool on_ = false;
    int run_ = 0;
};

inline std::vector<bool> apply_hysteresis(const std::vector<bool>& raw,
                                          const HysteresisParams& params) {
    HysteresisGate gate(params);
    std::vector<bool> out;
    out.reserve(raw.size());
    for (const bool value : raw) {
        out.push_back(gate.step(value));
    }
    return out;
}

}  // namespace collwarn
