#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "semimatch/instance.hpp"

namespace semimatch {

/// Recorded operations of one EnvelopeHeap lifetime, replayable in tests.
struct EnvelopeTrace {
  struct Op {
    enum class Kind { kInsert, kDeleteMin };
    Kind kind;
    Cost slope = 0;
    Cost intercept = 0;
    int valley = 0;
  };
  int domain = 0;
  std::vector<Cost> offsets;  // offsets[x - 1] = h(x)
  std::vector<Op> ops;
};

/// Heap over the indices 1..N of a family of unimodal functions
///   f_i(x) = w_i * x + d_i - h(x)
/// that share one offset sequence h. The lines g_i(x) = w_i * x + d_i form a
/// lower envelope, and since h is shared, f_i is minimal at x exactly when
/// g_i is. Each envelope line keeps two pointers that walk outward from its
/// valley, so the live minimum is always among at most two candidates per
/// line.
class EnvelopeHeap {
 public:
  struct Minimum {
    int index;
    Cost value;
    int function;
  };
  /// Integer interval of an envelope line after clipping to [1, N];
  /// lo > hi when the line owns no integer point.
  struct Segment {
    int function;
    int lo;
    int hi;
  };

  EnvelopeHeap() = default;
  EnvelopeHeap(int domain, std::span<const Cost> offsets) { reset(domain, offsets); }

  /// Clears all functions and makes every index of 1..domain live.
  void reset(int domain, std::span<const Cost> offsets);

  /// Adds f(x) = slope * x + intercept - h(x) with valley index `valley`
  /// (clamped to [1, N]). Returns the function id (ids count up from 0).
  int insert(Cost slope, Cost intercept, int valley);

  std::optional<Minimum> try_access_min();
  /// Throws std::logic_error when no function or no live index remains.
  Minimum access_min();
  Minimum delete_min();

  int domain() const { return domain_; }
  int num_functions() const { return static_cast<int>(lines_.size()); }
  int live_count() const { return live_; }
  bool is_deleted(int x) const { return deleted_[static_cast<std::size_t>(x)] != 0; }
  /// Whether the function currently sits in the envelope structure.
  bool on_envelope(int function) const { return lines_[static_cast<std::size_t>(function)].active; }
  Cost value(int function, int x) const;
  Cost offset(int x) const { return offsets_[static_cast<std::size_t>(x)]; }
  Cost line_value(int function, int x) const;
  /// Envelope lines in decreasing slope order, including empty ones.
  std::vector<Segment> segments() const;
  /// Non-stale entries currently in the candidate heap.
  int valid_candidate_count() const;

  /// Every reset afterwards opens a new trace in `sink`; nullptr stops.
  void record_traces(std::vector<EnvelopeTrace>* sink) { trace_sink_ = sink; }

 private:
  struct Line {
    Cost slope;
    Cost intercept;
    int valley;
    int lo = 1;
    int hi = 0;
    int p = 0;  // largest live index in [lo, min(valley, hi)], or lo - 1
    int q = 0;  // smallest live index in [max(valley + 1, lo), hi], or hi + 1
    std::uint32_t left_generation = 0;
    std::uint32_t right_generation = 0;
    bool active = false;
    int prev = -1;  // neighbors in slope order
    int next = -1;
    int child_left = -1;
    int child_right = -1;
    std::uint32_t priority = 0;
  };
  struct Candidate {
    Cost value;
    int index;
    int function;
    bool left;
    std::uint32_t generation;
    bool operator>(const Candidate& o) const {
      if (value != o.value) return value > o.value;
      if (index != o.index) return index > o.index;
      return function > o.function;
    }
  };

  bool useless(int a, int b, int c) const;
  int find_slope(Cost slope, int& before, int& after) const;
  void link(int id, int before, int after);
  void unlink(int id);
  int treap_merge(int a, int b);
  void treap_split(int t, Cost slope, int& left, int& right);
  void evict(int id);
  void refresh_interval(int id);
  void reclamp(int id);
  void push_left(int id);
  void push_right(int id);
  bool stale(const Candidate& c) const;
  void drop_stale();

  int domain_ = 0;
  int live_ = 0;
  std::vector<Cost> offsets_;  // 1-based
  std::vector<char> deleted_;  // 1-based
  std::vector<Line> lines_;
  // T_g: a treap keyed by decreasing slope threaded with a sorted list.
  int root_ = -1;
  int head_ = -1;
  int envelope_size_ = 0;
  std::minstd_rand priorities_;
  std::vector<Candidate> candidates_;  // binary min-heap, stale entries dropped lazily
  std::vector<EnvelopeTrace>* trace_sink_ = nullptr;
  int trace_index_ = -1;
};

/// Minimum over live indices of all inserted functions by direct scan.
std::optional<EnvelopeHeap::Minimum> naive_envelope_min(const EnvelopeHeap& heap);

}  // namespace semimatch
