#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cwb/field.hpp"
#include "cwb/linop.hpp"
#include "cwb/newton.hpp"

namespace cwb {

/// Shortest-roundtrip decimal formatting used by every CSV/text emitter.
std::string format_double(double v);

/// Field serialization: one coefficient per line, columns
///   n_1 .. n_d  k_1 .. k_b  re  im
/// preceded by the header line `# cwb-field d=<d> b=<b> box=<radius>`.
void write_field(std::ostream& out, const FourierField& f);
FourierField read_field(std::istream& in);

/// Trace CSV, frozen column order:
/// step,N,residual_F,dq_F,lambda_prime_1..b,inv_norm,decay_B,decay_L,tail,ms
void write_trace_csv(std::ostream& out, const NewtonTrace& trace, int b);

/// Dense operator dump, row-major, with a site-order header.
void write_operator_dump(std::ostream& out, const BlockOperator& T);

}  // namespace cwb
