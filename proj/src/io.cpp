#include "cwb/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cwb {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field(std::ostream& out, const FourierField& f) {
  out << "# cwb-field d=" << f.d() << " b=" << f.b()
      << " box=" << f.support_box().radius << "\n";
  for (const auto& [x, c] : f.entries()) {
    for (int v : x.n) out << v << " ";
    for (int v : x.k) out << v << " ";
    out << format_double(c.real()) << " " << format_double(c.imag()) << "\n";
  }
}

FourierField read_field(std::istream& in) {
  std::string header;
  std::getline(in, header);
  int d = 0, b = 0, radius = 0;
  if (std::sscanf(header.c_str(), "# cwb-field d=%d b=%d box=%d", &d, &b,
                  &radius) != 3)
    throw std::runtime_error("read_field: bad header: " + header);
  FourierField f(d, b, Box{radius});
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    MultiIndex x;
    x.n.resize(d);
    x.k.resize(b);
    for (int i = 0; i < d; ++i) row >> x.n[i];
    for (int i = 0; i < b; ++i) row >> x.k[i];
    double re = 0.0, im = 0.0;
    row >> re >> im;
    if (!row) throw std::runtime_error("read_field: bad row: " + line);
    f.set(x, Complex(re, im));
  }
  return f;
}

void write_trace_csv(std::ostream& out, const NewtonTrace& trace, int b) {
  out << "step,N,residual_F,dq_F";
  for (int j = 1; j <= b; ++j) out << ",lambda_prime_" << j;
  out << ",inv_norm,decay_B,decay_L,tail,ms\n";
  for (const auto& rec : trace.steps) {
    out << rec.step << "," << rec.N << "," << format_double(rec.residual_F)
        << "," << format_double(rec.dq_F);
    for (int j = 0; j < b; ++j)
      out << "," << format_double(rec.lambda_prime[j]);
    out << "," << format_double(rec.inv_norm) << ","
        << format_double(rec.decay_B) << "," << format_double(rec.decay_L)
        << "," << format_double(rec.tail) << "," << rec.ms << "\n";
  }
}

void write_operator_dump(std::ostream& out, const BlockOperator& T) {
  out << "# cwb-operator dim=" << T.dim() << " box=" << T.box.radius
      << " epsilon=" << format_double(T.epsilon) << "\n";
  out << "# sites:";
  for (const auto& s : T.sites) out << " " << s.str();
  out << "\n";
  for (int i = 0; i < T.dim(); ++i) {
    for (int j = 0; j < T.dim(); ++j)
      out << (j ? " " : "") << format_double(T.dense(i, j));
    out << "\n";
  }
}

}  // namespace cwb
