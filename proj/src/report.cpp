#include "oscillab/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace oscillab {

namespace {

std::string header_lines(const RunMeta& meta) {
  std::ostringstream os;
  os << "# tool " << meta.tool << " " << meta.version << "\n";
  os << "# seed " << meta.seed << "\n";
  os << "# config " << meta.config_hash << "\n";
  return os.str();
}

}  // namespace

std::string sweep_csv(const DecayFitResult& result, const RunMeta& meta) {
  std::ostringstream os;
  os << header_lines(meta);
  os << "lambda,norm_lower,norm_upper,grid_mx,grid_my,wall_ms\n";
  for (const SweepPoint& pt : result.points) {
    os << format_double(pt.lambda) << "," << format_double(pt.bracket.lower) << ","
       << format_double(pt.bracket.upper) << "," << pt.grid.mx << "," << pt.grid.my << ","
       << format_double(pt.wall_ms) << "\n";
  }
  return os.str();
}

std::string counterexample_csv(const CounterexampleResult& result, const RunMeta& meta) {
  std::ostringstream os;
  os << header_lines(meta);
  os << "K,sup_abs_integral\n";
  for (size_t i = 0; i < result.K.size(); ++i)
    os << format_double(result.K[i]) << "," << format_double(result.values[i]) << "\n";
  return os.str();
}

std::string uniformity_csv(const UniformityReport& report, const RunMeta& meta) {
  std::ostringstream os;
  os << header_lines(meta);
  os << "draw,norm_upper,c_hat";
  if (!report.draws.empty())
    for (size_t t = 0; t < report.draws.front().coeffs.size(); ++t) os << ",coeff_" << t;
  os << "\n";
  for (size_t d = 0; d < report.draws.size(); ++d) {
    const UniformityDraw& draw = report.draws[d];
    os << d << "," << format_double(draw.norm_upper) << "," << format_double(draw.c_hat);
    for (double c : draw.coeffs) os << "," << format_double(c);
    os << "\n";
  }
  return os.str();
}

std::string atoms_csv(const AtomImageReport& report, const RunMeta& meta) {
  std::ostringstream os;
  os << header_lines(meta);
  os << "interval_length,image_l1\n";
  for (size_t i = 0; i < report.sizes.size(); ++i)
    os << format_double(report.sizes[i]) << "," << format_double(report.norms[i]) << "\n";
  return os.str();
}

std::string sweep_svg(const DecayFitResult& result, const std::string& title) {
  const double W = 640.0, H = 480.0, ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const SweepPoint& pt : result.points) {
    if (pt.bracket.lower <= 0.0 || pt.bracket.upper <= 0.0) continue;
    x0 = std::min(x0, std::log2(pt.lambda));
    x1 = std::max(x1, std::log2(pt.lambda));
    y0 = std::min(y0, std::log2(pt.bracket.lower));
    y1 = std::max(y1, std::log2(pt.bracket.upper));
  }
  if (x1 <= x0) {
    x0 -= 1;
    x1 += 1;
  }
  if (y1 <= y0) {
    y0 -= 1;
    y1 += 1;
  }
  const double ypad = 0.05 * (y1 - y0);
  y0 -= ypad;
  y1 += ypad;
  auto px = [&](double lx) { return ml + (lx - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double ly) { return H - mb - (ly - y0) / (y1 - y0) * (H - mt - mb); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
        "font-size=\"14\">"
     << title << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">log2 lambda</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2
     << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 "
        "16 "
     << H / 2 << ")\">log2 norm</text>\n";
  // axis ticks at integer exponents
  for (int e = static_cast<int>(std::ceil(x0)); e <= static_cast<int>(std::floor(x1)); ++e) {
    os << "<line x1=\"" << px(e) << "\" y1=\"" << H - mb << "\" x2=\"" << px(e) << "\" y2=\""
       << H - mb + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(e) << "\" y=\"" << H - mb + 18
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" << e
       << "</text>\n";
  }
  // prediction guide through the first bracket midpoint
  if (result.predicted_decay && !result.points.empty() && result.points.front().bracket.lower > 0) {
    const double slope = -to_double(*result.predicted_decay);
    const double lx_ref = std::log2(result.points.front().lambda);
    const double ly_ref = 0.5 * (std::log2(result.points.front().bracket.lower) +
                                 std::log2(result.points.front().bracket.upper));
    const double lyA = ly_ref + slope * (x0 - lx_ref);
    const double lyB = ly_ref + slope * (x1 - lx_ref);
    os << "<line x1=\"" << px(x0) << "\" y1=\"" << py(lyA) << "\" x2=\"" << px(x1) << "\" y2=\""
       << py(lyB) << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    os << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 14
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" "
          "fill=\"#555555\">guide slope "
       << format_double(slope) << "</text>\n";
  }
  // bracket whiskers and midpoints
  for (const SweepPoint& pt : result.points) {
    if (pt.bracket.lower <= 0.0 || pt.bracket.upper <= 0.0) continue;
    const double lx = std::log2(pt.lambda);
    const double yl = py(std::log2(pt.bracket.lower));
    const double yu = py(std::log2(pt.bracket.upper));
    os << "<line x1=\"" << px(lx) << "\" y1=\"" << yl << "\" x2=\"" << px(lx) << "\" y2=\"" << yu
       << "\" stroke=\"#1f6fb2\" stroke-width=\"2\"/>\n";
    os << "<circle cx=\"" << px(lx) << "\" cy=\"" << 0.5 * (yl + yu)
       << "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
  }
  os << "<text x=\"" << ml + 6 << "\" y=\"" << mt + 14
     << "\" font-family=\"monospace\" font-size=\"11\">fit slope [" << format_double(
            std::min(result.fit_lower.slope, result.fit_upper.slope))
     << ", " << format_double(std::max(result.fit_lower.slope, result.fit_upper.slope))
     << "] verdict " << verdict_name(result.verdict) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) raise(errc::io_error, "write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace oscillab
