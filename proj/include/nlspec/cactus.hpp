#pragma once
// Exact enumeration of admissible coincidence graphs and the moment formula.
//
// A coincidence graph is the quotient of the labeled bipartite 2q-cycle
// i_1 j_1 i_2 ... i_q j_q by a pair of set partitions (one on the i
// positions, one on the j positions).  It is admissible when every
// biconnected component of the quotient multigraph is a simple cycle, i.e.
// cycles meet at most in a vertex and every edge lies on exactly one cycle
// (a cactus).  Moments of the limiting spectral law are weighted counts of
// these graphs; everything here is exact integer/rational arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "nlspec/activation.hpp"  // ValidationError

namespace nlspec {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

struct CapacityError : ValidationError {
  using ValidationError::ValidationError;
};

// x^e for integer e of either sign (x != 0 when e < 0).
inline rational rat_pow(const rational& x, long e) {
  if (e < 0) {
    if (x == 0) throw ValidationError("rat_pow: 0 to a negative power");
    return rational(1) / rat_pow(x, -e);
  }
  rational r(1), base(x);
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r *= base;
    base *= base;
  }
  return r;
}

// ---- Set partitions ---------------------------------------------------------

// All set partitions of {0..q-1} as restricted growth strings: a[0] = 0 and
// a[i] <= 1 + max(a[0..i-1]).  Distinct strings are distinct partitions.
inline std::vector<std::vector<std::uint8_t>> set_partitions(int q) {
  std::vector<std::vector<std::uint8_t>> out;
  if (q <= 0) return out;
  std::vector<std::uint8_t> a(q, 0);
  // iterate in lexicographic RGS order
  std::vector<std::uint8_t> mx(q, 0);  // mx[i] = max(a[0..i-1])
  int i = q;                           // start by emitting the all-zero string
  while (true) {
    if (i == q) {
      out.push_back(a);
      --i;
      continue;
    }
    if (i <= 0) break;
    if (a[i] <= mx[i]) {  // bump position i and reset the suffix
      ++a[i];
      for (int t = i + 1; t < q; ++t) {
        a[t] = 0;
        mx[t] = std::max<std::uint8_t>(mx[t - 1], a[t - 1]);
      }
      i = q;
    } else {
      --i;
    }
  }
  return out;
}

// ---- Domain types -----------------------------------------------------------

struct CoincidenceGraph {
  int q = 0;
  std::vector<std::uint8_t> i_partition;  // RGS over i positions
  std::vector<std::uint8_t> j_partition;  // RGS over j positions
};

struct AdmissibilityStats {
  bool admissible = false;
  int I_i = 0;         // q - number of i-blocks
  int I_j = 0;         // q - number of j-blocks
  int b = 0;           // blocks that are a double edge on two vertices
  int cycle_count = 0; // total number of blocks
};

struct CactusCountTable {
  int q = 0;
  // (I_i, I_j, b) -> number of admissible partition pairs
  std::map<std::tuple<int, int, int>, std::int64_t> counts;
};

// ---- Classification ---------------------------------------------------------

// Workspace reused across the Bell(q)^2 classification calls; all scratch is
// sized once for q_max vertices / 2*q_max edges.
class CactusClassifier {
 public:
  explicit CactusClassifier(int q_max = 12)
      : qmax_(q_max),
        head_(2 * q_max + 2, -1),
        depth_(2 * q_max),
        low_(2 * q_max),
        visited_(2 * q_max),
        used_edge_(4 * q_max),
        frame_v_(2 * q_max + 1),
        frame_edge_(2 * q_max + 1),
        frame_cursor_(2 * q_max + 1) {
    next_.reserve(8 * qmax_);
    eto_.reserve(8 * qmax_);
    eid_.reserve(8 * qmax_);
    estack_.reserve(4 * qmax_);
    eu_.reserve(4 * qmax_);
    ev_.reserve(4 * qmax_);
  }

  AdmissibilityStats classify(const CoincidenceGraph& g) {
    const int q = g.q;
    if (q < 1 || int(g.i_partition.size()) != q ||
        int(g.j_partition.size()) != q)
      throw ValidationError("classify: malformed coincidence graph");
    int ni = 0, nj = 0;
    for (int p = 0; p < q; ++p) {
      ni = std::max(ni, int(g.i_partition[p]) + 1);
      nj = std::max(nj, int(g.j_partition[p]) + 1);
    }
    const int nv = ni + nj, ne = 2 * q;
    // build the quotient multigraph: i_p - j_p and j_p - i_{p+1 mod q}
    eu_.clear();
    ev_.clear();
    for (int p = 0; p < q; ++p) {
      eu_.push_back(g.i_partition[p]);
      ev_.push_back(ni + g.j_partition[p]);
      eu_.push_back(ni + g.j_partition[p]);
      ev_.push_back(g.i_partition[(p + 1) % q]);
    }
    // half-edge adjacency lists (linked by head_/next_)
    std::fill(head_.begin(), head_.begin() + nv, -1);
    next_.assign(2 * ne, -1);
    eto_.assign(2 * ne, 0);
    eid_.assign(2 * ne, 0);
    int slot = 0;
    for (int e = 0; e < ne; ++e) {
      eto_[slot] = ev_[e]; eid_[slot] = e; next_[slot] = head_[eu_[e]];
      head_[eu_[e]] = slot++;
      eto_[slot] = eu_[e]; eid_[slot] = e; next_[slot] = head_[ev_[e]];
      head_[ev_[e]] = slot++;
    }

    // iterative DFS computing lowpoints; blocks are maximal edge runs popped
    // from the edge stack when a child cannot reach above its parent
    std::fill(visited_.begin(), visited_.begin() + nv, 0);
    std::fill(used_edge_.begin(), used_edge_.begin() + ne, 0);
    estack_.clear();

    AdmissibilityStats st;
    st.I_i = q - ni;
    st.I_j = q - nj;
    st.admissible = true;

    int top = 0;
    frame_v_[0] = 0;
    frame_edge_[0] = -1;
    frame_cursor_[0] = head_[0];
    visited_[0] = 1;
    depth_[0] = low_[0] = 0;
    while (top >= 0) {
      const int u = frame_v_[top];
      int cur = frame_cursor_[top];
      bool advanced = false;
      while (cur != -1) {
        const int e = eid_[cur], w = eto_[cur];
        cur = next_[cur];
        if (used_edge_[e]) continue;
        used_edge_[e] = 1;
        estack_.push_back(e);
        if (!visited_[w]) {
          visited_[w] = 1;
          depth_[w] = low_[w] = depth_[u] + 1;
          frame_cursor_[top] = cur;
          ++top;
          frame_v_[top] = w;
          frame_edge_[top] = e;
          frame_cursor_[top] = head_[w];
          advanced = true;
          break;
        }
        low_[u] = std::min(low_[u], depth_[w]);  // back edge
      }
      if (advanced) continue;
      frame_cursor_[top] = -1;
      const int entry = frame_edge_[top];
      --top;
      if (top >= 0) {
        const int p = frame_v_[top];
        low_[p] = std::min(low_[p], low_[u]);
        if (low_[u] >= depth_[p]) {
          // pop one block: edges down to and including the entry edge
          int e_cnt = 0, v_cnt = 0;
          vmark_.assign(nv, 0);
          while (true) {
            const int e = estack_.back();
            estack_.pop_back();
            ++e_cnt;
            for (int x : {int(eu_[e]), int(ev_[e])})
              if (!vmark_[x]) { vmark_[x] = 1; ++v_cnt; }
            if (e == entry) break;
          }
          if (e_cnt != v_cnt) st.admissible = false;
          if (e_cnt == 2 && v_cnt == 2) ++st.b;
          ++st.cycle_count;
        }
      }
    }
    // the quotient of a connected cycle is connected, so the DFS covers all
    // edges; any leftover would indicate a malformed input
    if (!estack_.empty())
      throw std::logic_error("classify: disconnected quotient graph");
    if (!st.admissible) st.b = 0;
    return st;
  }

 private:
  int qmax_;
  std::vector<int> head_, next_, eto_, eid_;
  std::vector<int> depth_, low_;
  std::vector<std::uint8_t> visited_, used_edge_, vmark_;
  std::vector<int> estack_;
  std::vector<std::uint8_t> eu_, ev_;
  std::vector<int> frame_v_, frame_edge_, frame_cursor_;
};

inline AdmissibilityStats classify(const CoincidenceGraph& g) {
  CactusClassifier c(g.q);
  return c.classify(g);
}

// ---- Count table ------------------------------------------------------------

inline constexpr int cactus_q_max = 8;  // Bell(8)^2 ~ 1.7e7 classifications

inline CactusCountTable count_table(int q) {
  if (q < 1 || q > cactus_q_max)
    throw CapacityError("count_table: q must be in [1," +
                        std::to_string(cactus_q_max) + "], got " +
                        std::to_string(q));
  const std::vector<std::vector<std::uint8_t>> parts = set_partitions(q);
  const int np = int(parts.size());
  CactusCountTable tbl;
  tbl.q = q;
  bool structure_ok = true;

#pragma omp parallel
  {
    CactusClassifier cls(q);
    CoincidenceGraph g;
    g.q = q;
    std::map<std::tuple<int, int, int>, std::int64_t> local;
    bool ok = true;
#pragma omp for schedule(dynamic, 8) nowait
    for (int a = 0; a < np; ++a) {
      g.i_partition = parts[a];
      for (int bidx = 0; bidx < np; ++bidx) {
        g.j_partition = parts[bidx];
        const AdmissibilityStats st = cls.classify(g);
        if (st.admissible) {
          // tree-of-cycles structure: blocks = identifications + 1
          if (st.cycle_count != st.I_i + st.I_j + 1) ok = false;
          ++local[{st.I_i, st.I_j, st.b}];
        }
      }
    }
#pragma omp critical
    {
      for (const auto& [k, v] : local) tbl.counts[k] += v;
      structure_ok = structure_ok && ok;
    }
  }
  if (!structure_ok)
    throw std::logic_error(
        "count_table: admissible graph violating cycle_count = I_i+I_j+1");
  return tbl;
}

// ---- Closed forms and the moment formula ------------------------------------

inline bigint binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  bigint r = 1;
  for (int t = 0; t < k; ++t) {
    r *= (n - t);
    r /= (t + 1);
  }
  return r;
}

// Narayana number N(q,k) = C(q,k) C(q-1,k) / (k+1)
inline bigint narayana(int q, int k) {
  if (q < 1 || k < 0 || k > q - 1)
    throw ValidationError("narayana: need 1 <= q and 0 <= k <= q-1");
  bigint v = binomial(q, k) * binomial(q - 1, k);
  v /= (k + 1);
  return v;
}

// q-th moment of the Marchenko-Pastur law with the given shape parameter and
// variance scale: scale^q * sum_k shape^k N(q,k).
inline rational mp_moment(int q, const rational& shape, const rational& scale) {
  if (q < 1) throw ValidationError("mp_moment: q must be >= 1");
  if (!(shape > 0)) throw ValidationError("mp_moment: shape must be positive");
  rational s(0);
  for (int k = 0; k <= q - 1; ++k)
    s += rational(narayana(q, k)) * rat_pow(shape, k);
  return rat_pow(scale, q) * s;
}

// Multilayer moment in the theta2 = 0 regime: the per-layer renormalized
// ensemble is Marchenko-Pastur with composite shape phi / prod(psi_p).
inline rational multilayer_mp_moment(int q, const rational& phi,
                                     const std::vector<rational>& psi_list) {
  rational denom(1);
  for (const rational& p : psi_list) {
    if (!(p > 0))
      throw ValidationError("multilayer_mp_moment: psi_p must be positive");
    denom *= p;
  }
  return mp_moment(q, phi / denom, rational(1));
}

// Moment formula over the count table:
//   m_q = sum A(q,I_i,I_j,b) theta1^b theta2^{q-b} psi^{I_i+1-q} phi^{I_j}
template <class T>
T moment_from_table(const CactusCountTable& tbl, const T& theta1,
                    const T& theta2, const T& phi, const T& psi) {
  T acc(0);
  auto ipow = [](const T& x, long e) {
    if constexpr (std::is_same_v<T, rational>) return rat_pow(x, e);
    else return std::pow(x, double(e));
  };
  for (const auto& [key, cnt] : tbl.counts) {
    const auto [Ii, Ij, b] = key;
    T term;
    if constexpr (std::is_same_v<T, rational>) term = T(cnt);
    else term = T(double(cnt));
    acc += term * ipow(theta1, b) * ipow(theta2, tbl.q - b) *
           ipow(psi, Ii + 1 - tbl.q) * ipow(phi, Ij);
  }
  return acc;
}

inline rational moment(int q, const rational& theta1, const rational& theta2,
                       const rational& phi, const rational& psi) {
  if (!(psi > 0) || !(phi > 0))
    throw ValidationError("moment: phi and psi must be positive");
  const CactusCountTable tbl = count_table(q);
  return moment_from_table<rational>(tbl, theta1, theta2, phi, psi);
}

// ---- CSV dump ---------------------------------------------------------------

// RFC-4180 rows (CRLF), columns q,I_i,I_j,b,count; ordered by (I_i,I_j,b).
inline std::string count_table_csv(const std::vector<CactusCountTable>& tables,
                                   bool header = true) {
  std::ostringstream os;
  if (header) os << "q,I_i,I_j,b,count\r\n";
  for (const CactusCountTable& t : tables)
    for (const auto& [k, v] : t.counts)
      os << t.q << ',' << std::get<0>(k) << ',' << std::get<1>(k) << ','
         << std::get<2>(k) << ',' << v << "\r\n";
  return os.str();
}

}  // namespace nlspec
