#include "semimatch/envelope_heap.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace semimatch {

namespace {

using Wide = __int128;

// floor(num / den) for den > 0.
Cost floor_div(Cost num, Cost den) {
  Cost q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

int clamp_index(Cost x, int domain) {
  return static_cast<int>(std::clamp<Cost>(x, 0, static_cast<Cost>(domain) + 1));
}

}  // namespace

void EnvelopeHeap::reset(int domain, std::span<const Cost> offsets) {
  if (domain < 0) throw std::invalid_argument("negative envelope heap domain");
  if (static_cast<int>(offsets.size()) < domain) throw std::invalid_argument("offset sequence shorter than domain");
  domain_ = domain;
  live_ = domain;
  offsets_.assign(static_cast<std::size_t>(domain) + 2, 0);
  std::copy_n(offsets.begin(), domain, offsets_.begin() + 1);
  deleted_.assign(static_cast<std::size_t>(domain) + 2, 0);
  lines_.clear();
  root_ = -1;
  head_ = -1;
  envelope_size_ = 0;
  candidates_.clear();
  trace_index_ = -1;
  if (trace_sink_) {
    trace_sink_->push_back(EnvelopeTrace{domain, std::vector<Cost>(offsets.begin(), offsets.begin() + domain), {}});
    trace_index_ = static_cast<int>(trace_sink_->size()) - 1;
  }
}

Cost EnvelopeHeap::line_value(int function, int x) const {
  const Line& l = lines_[static_cast<std::size_t>(function)];
  return l.slope * x + l.intercept;
}

Cost EnvelopeHeap::value(int function, int x) const {
  return line_value(function, x) - offsets_[static_cast<std::size_t>(x)];
}

// Slopes w_a > w_b > w_c. b is useless when a and c meet no later than a and
// b do; a shared point goes to the larger slope, so b would own nothing.
bool EnvelopeHeap::useless(int a, int b, int c) const {
  const Line& la = lines_[static_cast<std::size_t>(a)];
  const Line& lb = lines_[static_cast<std::size_t>(b)];
  const Line& lc = lines_[static_cast<std::size_t>(c)];
  const Wide lhs = static_cast<Wide>(lb.intercept - la.intercept) * static_cast<Wide>(lb.slope - lc.slope);
  const Wide rhs = static_cast<Wide>(lc.intercept - lb.intercept) * static_cast<Wide>(la.slope - lb.slope);
  return lhs >= rhs;
}

// Descends the treap for `slope`; returns the line with that slope or -1,
// and the closest lines before (larger slope) and after it.
int EnvelopeHeap::find_slope(Cost slope, int& before, int& after) const {
  before = -1;
  after = -1;
  int t = root_;
  while (t >= 0) {
    const Line& l = lines_[static_cast<std::size_t>(t)];
    if (l.slope == slope) return t;
    if (l.slope > slope) {
      before = t;
      t = l.child_right;
    } else {
      after = t;
      t = l.child_left;
    }
  }
  return -1;
}

int EnvelopeHeap::treap_merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  Line& la = lines_[static_cast<std::size_t>(a)];
  Line& lb = lines_[static_cast<std::size_t>(b)];
  if (la.priority > lb.priority) {
    la.child_right = treap_merge(la.child_right, b);
    return a;
  }
  lb.child_left = treap_merge(a, lb.child_left);
  return b;
}

// left: slopes greater than `slope`; right: the rest.
void EnvelopeHeap::treap_split(int t, Cost slope, int& left, int& right) {
  if (t < 0) {
    left = right = -1;
    return;
  }
  Line& l = lines_[static_cast<std::size_t>(t)];
  if (l.slope > slope) {
    treap_split(l.child_right, slope, l.child_right, right);
    left = t;
  } else {
    treap_split(l.child_left, slope, left, l.child_left);
    right = t;
  }
}

void EnvelopeHeap::link(int id, int before, int after) {
  Line& l = lines_[static_cast<std::size_t>(id)];
  l.priority = static_cast<std::uint32_t>(priorities_());
  l.child_left = l.child_right = -1;
  int left = -1;
  int right = -1;
  treap_split(root_, l.slope, left, right);
  root_ = treap_merge(treap_merge(left, id), right);
  l.prev = before;
  l.next = after;
  if (before >= 0) lines_[static_cast<std::size_t>(before)].next = id;
  else head_ = id;
  if (after >= 0) lines_[static_cast<std::size_t>(after)].prev = id;
  ++envelope_size_;
}

void EnvelopeHeap::unlink(int id) {
  Line& l = lines_[static_cast<std::size_t>(id)];
  int left = -1;
  int rest = -1;
  int middle = -1;
  int right = -1;
  treap_split(root_, l.slope, left, rest);
  // `rest` starts with this line, the only one of its slope.
  treap_split(rest, l.slope - 1, middle, right);
  root_ = treap_merge(left, right);
  if (l.prev >= 0) lines_[static_cast<std::size_t>(l.prev)].next = l.next;
  else head_ = l.next;
  if (l.next >= 0) lines_[static_cast<std::size_t>(l.next)].prev = l.prev;
  l.prev = l.next = -1;
  --envelope_size_;
}

void EnvelopeHeap::evict(int id) {
  unlink(id);
  Line& l = lines_[static_cast<std::size_t>(id)];
  l.active = false;
  ++l.left_generation;
  ++l.right_generation;
}

void EnvelopeHeap::refresh_interval(int id) {
  Line& l = lines_[static_cast<std::size_t>(id)];
  Cost lo = 1;
  Cost hi = domain_;
  if (l.prev >= 0) {
    const Line& a = lines_[static_cast<std::size_t>(l.prev)];
    lo = std::max<Cost>(lo, floor_div(l.intercept - a.intercept, a.slope - l.slope) + 1);
  }
  if (l.next >= 0) {
    const Line& c = lines_[static_cast<std::size_t>(l.next)];
    hi = std::min<Cost>(hi, floor_div(c.intercept - l.intercept, l.slope - c.slope));
  }
  l.lo = clamp_index(lo, domain_);
  l.hi = clamp_index(hi, domain_);
  reclamp(id);
}

// Pulls both pointers back inside the (possibly shrunken) interval and
// skips deleted indices.
void EnvelopeHeap::reclamp(int id) {
  Line& l = lines_[static_cast<std::size_t>(id)];
  const int left_top = std::min(l.valley, l.hi);
  int p = std::min(l.p, left_top);
  while (p >= l.lo && deleted_[static_cast<std::size_t>(p)]) --p;
  if (p < l.lo) p = l.lo - 1;
  const int right_bottom = std::max(l.valley + 1, l.lo);
  int q = std::max(l.q, right_bottom);
  while (q <= l.hi && deleted_[static_cast<std::size_t>(q)]) ++q;
  if (q > l.hi) q = l.hi + 1;
  if (p != l.p) {
    l.p = p;
    ++l.left_generation;
    push_left(id);
  }
  if (q != l.q) {
    l.q = q;
    ++l.right_generation;
    push_right(id);
  }
}

void EnvelopeHeap::push_left(int id) {
  const Line& l = lines_[static_cast<std::size_t>(id)];
  if (l.p < l.lo || l.p > l.hi) return;
  candidates_.push_back(Candidate{value(id, l.p), l.p, id, true, l.left_generation});
  std::push_heap(candidates_.begin(), candidates_.end(), std::greater<>());
}

void EnvelopeHeap::push_right(int id) {
  const Line& l = lines_[static_cast<std::size_t>(id)];
  if (l.q < l.lo || l.q > l.hi) return;
  candidates_.push_back(Candidate{value(id, l.q), l.q, id, false, l.right_generation});
  std::push_heap(candidates_.begin(), candidates_.end(), std::greater<>());
}

int EnvelopeHeap::insert(Cost slope, Cost intercept, int valley) {
  const int id = static_cast<int>(lines_.size());
  Line line{slope, intercept, std::clamp(valley, 1, std::max(domain_, 1))};
  // Sentinels so the first reclamp starts at the valley and pushes both sides.
  line.p = domain_ + 1;
  line.q = 0;
  lines_.push_back(line);
  if (trace_index_ >= 0) {
    (*trace_sink_)[static_cast<std::size_t>(trace_index_)].ops.push_back(
        EnvelopeTrace::Op{EnvelopeTrace::Op::Kind::kInsert, slope, intercept, valley});
  }

  int before = -1;
  int after = -1;
  if (const int same = find_slope(slope, before, after); same >= 0) {
    if (lines_[static_cast<std::size_t>(same)].intercept <= intercept) return id;
    before = lines_[static_cast<std::size_t>(same)].prev;
    after = lines_[static_cast<std::size_t>(same)].next;
    evict(same);
  }
  if (before >= 0 && after >= 0 && useless(before, id, after)) return id;
  link(id, before, after);
  lines_[static_cast<std::size_t>(id)].active = true;

  while (true) {
    const int a = lines_[static_cast<std::size_t>(id)].prev;
    if (a < 0) break;
    const int a2 = lines_[static_cast<std::size_t>(a)].prev;
    if (a2 < 0 || !useless(a2, a, id)) break;
    evict(a);
  }
  while (true) {
    const int c = lines_[static_cast<std::size_t>(id)].next;
    if (c < 0) break;
    const int c2 = lines_[static_cast<std::size_t>(c)].next;
    if (c2 < 0 || !useless(id, c, c2)) break;
    evict(c);
  }

  refresh_interval(id);
  if (const int a = lines_[static_cast<std::size_t>(id)].prev; a >= 0) refresh_interval(a);
  if (const int c = lines_[static_cast<std::size_t>(id)].next; c >= 0) refresh_interval(c);
  return id;
}

bool EnvelopeHeap::stale(const Candidate& c) const {
  const Line& l = lines_[static_cast<std::size_t>(c.function)];
  if (!l.active || deleted_[static_cast<std::size_t>(c.index)]) return true;
  if (c.index < l.lo || c.index > l.hi) return true;
  return c.generation != (c.left ? l.left_generation : l.right_generation);
}

void EnvelopeHeap::drop_stale() {
  while (!candidates_.empty() && stale(candidates_.front())) {
    std::pop_heap(candidates_.begin(), candidates_.end(), std::greater<>());
    candidates_.pop_back();
  }
}

std::optional<EnvelopeHeap::Minimum> EnvelopeHeap::try_access_min() {
  drop_stale();
  if (candidates_.empty()) return std::nullopt;
  const Candidate& c = candidates_.front();
  return Minimum{c.index, c.value, c.function};
}

EnvelopeHeap::Minimum EnvelopeHeap::access_min() {
  if (lines_.empty()) throw std::logic_error("access_min on an envelope heap without functions");
  if (live_ == 0) throw std::logic_error("access_min on an envelope heap without live indices");
  auto m = try_access_min();
  if (!m) throw std::logic_error("envelope heap has live indices but no candidate");
  return *m;
}

EnvelopeHeap::Minimum EnvelopeHeap::delete_min() {
  const Minimum m = access_min();
  const Candidate top = candidates_.front();
  std::pop_heap(candidates_.begin(), candidates_.end(), std::greater<>());
  candidates_.pop_back();
  deleted_[static_cast<std::size_t>(m.index)] = 1;
  --live_;
  if (trace_index_ >= 0) {
    (*trace_sink_)[static_cast<std::size_t>(trace_index_)].ops.push_back(
        EnvelopeTrace::Op{EnvelopeTrace::Op::Kind::kDeleteMin, 0, 0, 0});
  }
  Line& l = lines_[static_cast<std::size_t>(m.function)];
  if (top.left) {
    int p = m.index - 1;
    while (p >= l.lo && deleted_[static_cast<std::size_t>(p)]) --p;
    l.p = std::max(p, l.lo - 1);
    ++l.left_generation;
    push_left(m.function);
  } else {
    int q = m.index + 1;
    while (q <= l.hi && deleted_[static_cast<std::size_t>(q)]) ++q;
    l.q = std::min(q, l.hi + 1);
    ++l.right_generation;
    push_right(m.function);
  }
  return m;
}

std::vector<EnvelopeHeap::Segment> EnvelopeHeap::segments() const {
  std::vector<Segment> out;
  out.reserve(static_cast<std::size_t>(envelope_size_));
  for (int id = head_; id >= 0; id = lines_[static_cast<std::size_t>(id)].next) {
    const Line& l = lines_[static_cast<std::size_t>(id)];
    out.push_back(Segment{id, l.lo, l.hi});
  }
  return out;
}

int EnvelopeHeap::valid_candidate_count() const {
  int count = 0;
  for (const Candidate& c : candidates_) count += stale(c) ? 0 : 1;
  return count;
}

std::optional<EnvelopeHeap::Minimum> naive_envelope_min(const EnvelopeHeap& heap) {
  std::optional<EnvelopeHeap::Minimum> best;
  for (int x = 1; x <= heap.domain(); ++x) {
    if (heap.is_deleted(x)) continue;
    for (int i = 0; i < heap.num_functions(); ++i) {
      const Cost v = heap.value(i, x);
      if (!best || v < best->value) best = EnvelopeHeap::Minimum{x, v, i};
    }
  }
  return best;
}

}  // namespace semimatch
