#include "ifstype/ifs.hpp"

#include <algorithm>

#include "ifstype/errors.hpp"

namespace ifstype {

std::vector<Violation> check(const WeightedIFS& ifs) {
    std::vector<Violation> out;
    auto add = [&](const char* code, std::size_t idx, const std::string& detail) {
        out.push_back({code, idx, detail});
    };

    if (!(ifs.ratio > 0 && ifs.ratio < 1))
        add("HullViolation", 0, "contraction ratio " + rat_str(ifs.ratio) + " outside (0,1)");
    if (ifs.digits.empty()) {
        add("SupportGap", 0, "no maps");
        return out;
    }
    if (ifs.digits.size() != ifs.probs.size())
        add("ProbabilitySum", 0, "digit/probability count mismatch");

    const std::size_t k = ifs.digits.size() - 1;
    for (std::size_t j = 0; j <= k; ++j) {
        if (ifs.digits[j] < 0 || ifs.digits[j] + ifs.ratio > 1)
            add("HullViolation", j, "map " + std::to_string(j) + " leaves [0,1]");
        if (j > 0 && !(ifs.digits[j - 1] < ifs.digits[j]))
            add("SupportGap", j, "digits not strictly increasing at index " + std::to_string(j));
    }
    if (ifs.digits[0] != 0)
        add("SupportGap", 0, "first digit is " + rat_str(ifs.digits[0]) + ", expected 0");
    if (ifs.digits[k] != 1 - ifs.ratio)
        add("SupportGap", k, "last digit is " + rat_str(ifs.digits[k]) + ", expected " + rat_str(Rat(1 - ifs.ratio)));
    for (std::size_t j = 0; j + 1 <= k; ++j) {
        if (ifs.digits[j + 1] - ifs.digits[j] > ifs.ratio)
            add("SupportGap", j, "gap after digit " + std::to_string(j) + " exceeds the ratio, support is not [0,1]");
    }

    if (ifs.probs.size() == ifs.digits.size() && !ifs.probs.empty()) {
        Rat sum = 0;
        Rat minp = ifs.probs[0];
        std::size_t argmin = 0;
        for (std::size_t j = 0; j < ifs.probs.size(); ++j) {
            if (ifs.probs[j] <= 0)
                add("ProbabilitySum", j, "weight " + std::to_string(j) + " is not positive");
            sum += ifs.probs[j];
            if (ifs.probs[j] < minp) { minp = ifs.probs[j]; argmin = j; }
        }
        if (sum != 1)
            add("ProbabilitySum", 0, "weights sum to " + rat_str(sum) + ", expected 1");
        if (ifs.probs[0] != ifs.probs[k])
            add("StandardAssumptionViolation", k, "end weights differ: p_0=" + rat_str(ifs.probs[0]) + ", p_k=" + rat_str(ifs.probs[k]));
        if (minp < ifs.probs[0])
            add("StandardAssumptionViolation", argmin,
                "weight " + std::to_string(argmin) + " is below the end weights");
    }
    return out;
}

void validate(const WeightedIFS& ifs) {
    auto violations = check(ifs);
    if (violations.empty()) return;
    std::string msg;
    for (const auto& v : violations) {
        if (!msg.empty()) msg += "; ";
        msg += v.code + "[" + std::to_string(v.index) + "] " + v.detail;
    }
    fail(violations.front().code, msg);
}

WordGeometry compose(const WeightedIFS& ifs, const Word& w) {
    // S_w(0) = sum_i digits[w_i] * ratio^(i-1), scale multiplies per letter.
    WordGeometry g{Rat(0), Rat(1), Rat(1)};
    for (std::uint32_t letter : w) {
        if (letter >= ifs.size()) fail("BadWord", "letter out of range");
        g.offset += g.scale * ifs.digits[letter];
        g.scale *= ifs.ratio;
        g.weight *= ifs.probs[letter];
    }
    return g;
}

} // namespace ifstype
