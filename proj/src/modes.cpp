#include "mdli/modes.hpp"

#include <algorithm>

namespace mdli {

// Bounds the input parses joined with output parses; declared configuration,
// not a paper value.
static constexpr int kJoinInputCap = 16;
static constexpr int kJointCap = 64;

std::vector<JointDesc> describe(const Domain& d, const TaskModel& m, const Example& ex,
                                int parse_limit, int keep) {
    std::vector<JointDesc> joints;
    auto in_parses = d.parse(m.input, nullptr, ex.input, parse_limit);
    int in_used = 0;
    for (const auto& pi : in_parses) {
        if (++in_used > kJoinInputCap) break;
        auto out_parses = d.parse(m.output, pi.desc, ex.output, parse_limit);
        for (const auto& po : out_parses) {
            JointDesc j;
            j.rank_in = pi.rank;
            j.rank_out = po.rank;
            j.desc_in = pi.desc;
            j.desc_out = po.desc;
            j.bits_in = rank_dl(pi.rank) + pi.dl;
            j.bits_out = rank_dl(po.rank) + po.dl;
            joints.push_back(std::move(j));
        }
    }
    std::sort(joints.begin(), joints.end(), [](const JointDesc& a, const JointDesc& b) {
        if (a.total() != b.total()) return a.total() < b.total();
        if (a.rank_in != b.rank_in) return a.rank_in < b.rank_in;
        return a.rank_out < b.rank_out;
    });
    size_t cap = keep > 0 ? size_t(keep) : size_t(kJointCap);
    if (joints.size() > cap) joints.resize(cap);
    return joints;
}

ExampleDL example_dl(const Domain& d, const TaskModel& m, const Example& ex, int parse_limit) {
    ExampleDL out;
    auto joints = describe(d, m, ex, parse_limit, 1);
    if (joints.empty()) return out;  // infinite sentinel: candidate model rejected
    out.bits_in = joints[0].bits_in;
    out.bits_out = joints[0].bits_out;
    out.best = joints[0];
    return out;
}

std::vector<Prediction> predict(const Domain& d, const TaskModel& m, const Datum& input,
                                int parse_limit, int max_results) {
    std::vector<Prediction> out;
    auto in_parses = d.parse(m.input, nullptr, input, parse_limit);
    for (const auto& pi : in_parses) {
        auto gens = d.generate(m.output, pi.desc, std::max(1, max_results / 4), nullptr);
        for (const auto& g : gens) {
            out.push_back({pi.rank, g.rank, g.datum});
            if (int(out.size()) >= max_results) return out;
        }
    }
    return out;
}

std::vector<Datum> predict_distinct(const Domain& d, const TaskModel& m, const Datum& input,
                                    int parse_limit, int n) {
    std::vector<Datum> out;
    for (const auto& p : predict(d, m, input, parse_limit, 64)) {
        bool dup = false;
        for (const auto& seen : out)
            if (Domain::datum_eq(seen, p.datum)) {
                dup = true;
                break;
            }
        if (!dup) {
            out.push_back(p.datum);
            if (int(out.size()) >= n) break;
        }
    }
    return out;
}

Result<Example> create(const Domain& d, const TaskModel& m, uint64_t seed, int parse_limit) {
    (void)parse_limit;
    Rng rng(seed);
    auto gin = d.generate(m.input, nullptr, 1, &rng);
    if (gin.empty()) return Result<Example>::fail("input generation failed");
    auto resolved_out = resolve(d, m.output, gin[0].desc);
    if (!resolved_out) return Result<Example>::fail(resolved_out.error);
    auto gout = d.generate(m.output, gin[0].desc, 1, &rng);
    if (gout.empty()) return Result<Example>::fail("output generation failed");
    return Result<Example>::ok(Example{gin[0].datum, gout[0].datum});
}

} // namespace mdli
