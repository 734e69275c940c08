#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace metn {

// Raised for malformed or inconsistent input data (parse failures, invalid
// split boundaries, node-universe mismatches).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Event {
    double t;
    int src;
    int dst;

    friend bool operator==(const Event&, const Event&) = default;
};

enum class SelfLoopPolicy { Drop, Error };

struct LoadOptions {
    // When set, timestamps are rescaled as t -> (t - t_min) / time_unit.
    std::optional<double> time_unit;
    // Overrides the horizon; defaults to the max (rescaled) timestamp.
    std::optional<double> horizon;
    SelfLoopPolicy self_loops = SelfLoopPolicy::Drop;
};

// Timestamped directed interactions on a dense integer node set.
// Events are sorted by time; ties keep input order.
struct EventLog {
    int nodes = 0;
    std::vector<Event> events;
    double horizon = 0.0;
    std::vector<std::string> labels;

    double time_origin = 0.0;
    double time_unit = 1.0;
    std::size_t dropped_self_loops = 0;

    std::size_t size() const { return events.size(); }

    const std::string& label(int v) const { return labels.at(static_cast<std::size_t>(v)); }

    std::vector<double> times() const {
        std::vector<double> out;
        out.reserve(events.size());
        for (const auto& e : events) out.push_back(e.t);
        return out;
    }
};

namespace detail {

inline std::vector<std::string> default_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

inline void append_double(std::string& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    out.append(buf, ptr);
}

} // namespace detail

inline EventLog make_event_log(int nodes, std::vector<Event> events, double horizon,
                               std::vector<std::string> labels = {}) {
    if (nodes < 0) throw std::invalid_argument("node count must be nonnegative");
    if (labels.empty()) labels = detail::default_labels(nodes);
    if (static_cast<int>(labels.size()) != nodes) {
        throw std::invalid_argument("label vector size must match node count");
    }
    for (const auto& e : events) {
        if (e.src < 0 || e.src >= nodes || e.dst < 0 || e.dst >= nodes) {
            throw std::invalid_argument("event endpoint outside node range");
        }
        if (e.src == e.dst) throw std::invalid_argument("self-loop event");
        if (!(e.t >= 0.0) || !(e.t <= horizon)) {
            throw std::invalid_argument("event time outside [0, horizon]");
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    EventLog log;
    log.nodes = nodes;
    log.events = std::move(events);
    log.horizon = horizon;
    log.labels = std::move(labels);
    return log;
}

// Canonical CSV: header "t,src,dst"; numeric timestamp, arbitrary string labels
// (no commas or newlines inside labels).
inline EventLog load_events(const std::string& path, const LoadOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open event file: " + path);

    struct RawEvent {
        double t;
        int src;
        int dst;
    };
    std::vector<RawEvent> raw;
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index;
    std::size_t dropped = 0;

    auto intern = [&](const std::string& name) {
        auto [it, inserted] = index.try_emplace(name, static_cast<int>(labels.size()));
        if (inserted) labels.push_back(name);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (line == "t,src,dst") continue;
            // fall through: headerless files are accepted
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos) {
            throw DataError("line " + std::to_string(line_no) + ": expected 3 fields");
        }
        double t = 0.0;
        const char* first = line.data();
        const char* last = line.data() + c1;
        auto [ptr, ec] = std::from_chars(first, last, t);
        if (ec != std::errc() || ptr != last) {
            throw DataError("line " + std::to_string(line_no) + ": bad timestamp '" +
                            line.substr(0, c1) + "'");
        }
        const std::string src = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string dst = line.substr(c2 + 1);
        if (src.empty() || dst.empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty node label");
        }
        if (src == dst) {
            if (opts.self_loops == SelfLoopPolicy::Error) {
                throw DataError("line " + std::to_string(line_no) + ": self-loop " + src +
                                " -> " + dst);
            }
            ++dropped;
            continue;
        }
        raw.push_back({t, intern(src), intern(dst)});
    }
    if (raw.empty()) throw DataError("no events in " + path);

    double t_min = raw.front().t;
    double t_max = raw.front().t;
    for (const auto& e : raw) {
        t_min = std::min(t_min, e.t);
        t_max = std::max(t_max, e.t);
    }
    const double unit = opts.time_unit.value_or(1.0);
    if (!(unit > 0.0)) throw DataError("time unit must be positive");
    const double origin = opts.time_unit ? t_min : 0.0;

    std::vector<Event> events;
    events.reserve(raw.size());
    for (const auto& e : raw) events.push_back({(e.t - origin) / unit, e.src, e.dst});
    const double horizon = opts.horizon.value_or((t_max - origin) / unit);

    EventLog log = make_event_log(static_cast<int>(labels.size()), std::move(events), horizon,
                                  std::move(labels));
    log.time_origin = origin;
    log.time_unit = unit;
    log.dropped_self_loops = dropped;
    return log;
}

inline void write_events(const EventLog& log, const std::string& path) {
    std::string out = "t,src,dst\n";
    for (const auto& e : log.events) {
        detail::append_double(out, e.t);
        out += ',';
        out += log.label(e.src);
        out += ',';
        out += log.label(e.dst);
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write event file: " + path);
    f << out;
}

struct SplitSpec {
    enum class Mode { ByCount, ByTime };
    Mode mode = Mode::ByCount;
    std::size_t count = 0;
    double time = 0.0;

    static SplitSpec by_count(std::size_t k) { return {Mode::ByCount, k, 0.0}; }
    static SplitSpec by_time(double t) { return {Mode::ByTime, 0, t}; }
};

// Splits into train/test windows. The split time becomes the train horizon and
// test timestamps are shifted so the test window starts at zero. Both sides
// share the node universe.
inline std::pair<EventLog, EventLog> split(const EventLog& log, const SplitSpec& spec) {
    const std::size_t total = log.size();
    std::size_t boundary = 0;
    double split_time = 0.0;
    if (spec.mode == SplitSpec::Mode::ByCount) {
        if (spec.count == 0 || spec.count >= total) {
            throw DataError("split count must lie strictly inside the event range");
        }
        boundary = spec.count;
        split_time = log.events[boundary - 1].t;
    } else {
        if (!(spec.time > 0.0) || !(spec.time < log.horizon)) {
            throw DataError("split time must lie strictly inside (0, horizon)");
        }
        split_time = spec.time;
        boundary = static_cast<std::size_t>(
            std::upper_bound(log.events.begin(), log.events.end(), spec.time,
                             [](double t, const Event& e) { return t < e.t; }) -
            log.events.begin());
    }
    if (boundary == 0 || boundary == total) {
        throw DataError("split produces an empty side");
    }

    EventLog train;
    train.nodes = log.nodes;
    train.labels = log.labels;
    train.horizon = split_time;
    train.events.assign(log.events.begin(), log.events.begin() + static_cast<std::ptrdiff_t>(boundary));
    train.time_origin = log.time_origin;
    train.time_unit = log.time_unit;

    EventLog test;
    test.nodes = log.nodes;
    test.labels = log.labels;
    test.horizon = log.horizon - split_time;
    test.events.reserve(total - boundary);
    for (std::size_t k = boundary; k < total; ++k) {
        const Event& e = log.events[k];
        test.events.push_back({e.t - split_time, e.src, e.dst});
    }
    test.time_origin = log.time_origin;
    test.time_unit = log.time_unit;
    return {std::move(train), std::move(test)};
}

// Edge-wise counts and node strengths.
struct SufficientStats {
    int n = 0;
    std::vector<std::int64_t> counts;        // n*n row-major, zero diagonal
    std::vector<std::int64_t> out_strength;  // s_i^out
    std::vector<std::int64_t> in_strength;   // s_j^in
    std::int64_t total = 0;
    std::int64_t unique_edges = 0;

    std::int64_t at(int i, int j) const {
        return counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(j)];
    }
};

inline SufficientStats sufficient_stats(const EventLog& log) {
    SufficientStats s;
    s.n = log.nodes;
    const std::size_t nn = static_cast<std::size_t>(log.nodes) * static_cast<std::size_t>(log.nodes);
    s.counts.assign(nn, 0);
    s.out_strength.assign(static_cast<std::size_t>(log.nodes), 0);
    s.in_strength.assign(static_cast<std::size_t>(log.nodes), 0);
    for (const auto& e : log.events) {
        auto& c = s.counts[static_cast<std::size_t>(e.src) * static_cast<std::size_t>(log.nodes) +
                           static_cast<std::size_t>(e.dst)];
        if (c == 0) ++s.unique_edges;
        ++c;
        ++s.out_strength[static_cast<std::size_t>(e.src)];
        ++s.in_strength[static_cast<std::size_t>(e.dst)];
        ++s.total;
    }
    return s;
}

struct InterEventStats {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t count = 0;
};

// Mean and unbiased variance of consecutive gaps of the merged stream.
// With a single gap the variance is reported as zero.
inline InterEventStats interevent_stats(const EventLog& log) {
    if (log.size() < 2) throw std::invalid_argument("need at least two events for gap statistics");
    const std::size_t m = log.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += log.events[k + 1].t - log.events[k].t;
    const double mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = (log.events[k + 1].t - log.events[k].t) - mean;
        ss += d * d;
    }
    const double variance = m > 1 ? ss / static_cast<double>(m - 1) : 0.0;
    return {mean, variance, m};
}

} // namespace metn
