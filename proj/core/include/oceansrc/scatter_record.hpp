#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oceansrc/geometry.hpp"
#include "oceansrc/vertical.hpp"

namespace oceansrc {

// Receiver data p^s_m together with the noise metadata needed to regenerate it.
struct ScatterRecord {
  std::vector<Point3> receivers;
  std::vector<cplx> values;
  double noise = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ScatterRecord&, const ScatterRecord&) = default;
};

// p^s [1 + delta (r1 + i r2)] with r1, r2 standard normal samples redrawn until
// they fall in [-1, 1]; one (r1, r2) pair per receiver, in receiver order.
ScatterRecord add_noise(const ScatterRecord& rec, double delta, std::uint64_t seed);

// CSV with header x,y,z,re,im,delta,seed.
void write_record_csv(const ScatterRecord& rec, std::ostream& out);
ScatterRecord read_record_csv(std::istream& in);

// Keyword text form:
//   scatter-record 1 / noise <d> / seed <s> / receivers <M> / M lines "x y z re im".
void write_record_text(const ScatterRecord& rec, std::ostream& out);
ScatterRecord read_record_text(std::istream& in);

}  // namespace oceansrc
