#include "hyperrelax/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace hyperrelax {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg_line_plot(std::ostream& os, const std::vector<double>& x, const std::vector<double>& y,
                         const PlotOptions& opt) {
  if (x.size() != y.size()) throw std::invalid_argument("plot series lengths differ");
  auto tx = [&](double v) { return opt.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.logy ? std::log10(v) : v; };
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    if ((opt.logx && x[i] <= 0.0) || (opt.logy && y[i] <= 0.0)) continue;
    pts.emplace_back(tx(x[i]), ty(y[i]));
  }
  const double ml = 80, mr = 20, mt = 40, mb = 50;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    auto [xa, xb] = std::minmax_element(pts.begin(), pts.end());
    x0 = xa->first;
    x1 = xb->first;
    const auto [ya, yb] =
        std::minmax_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    y0 = ya->second;
    y1 = yb->second;
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + (y1 - v) / (y1 - y0) * ph; };
  auto tick = [](double v, bool log) { return log ? fmt::format("1e{:.2g}", v) : fmt::format("{:.4g}", v); };

  os << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)",
                    opt.width, opt.height, opt.width, opt.height)
     << '\n';
  os << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  os << fmt::format(R"(<text x="{}" y="24" text-anchor="middle" font-size="16" font-family="sans-serif">{}</text>)",
                    opt.width / 2, escape(opt.title))
     << '\n';
  os << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", ml, mt, pw, ph)
     << '\n';
  const std::string text = R"(<text x="{:.1f}" y="{:.1f}" text-anchor="{}" font-size="12" font-family="sans-serif">{}</text>)";
  os << fmt::format(fmt::runtime(text), ml, mt + ph + 18, "start", tick(x0, opt.logx)) << '\n';
  os << fmt::format(fmt::runtime(text), ml + pw, mt + ph + 18, "end", tick(x1, opt.logx)) << '\n';
  os << fmt::format(fmt::runtime(text), ml - 6, mt + ph, "end", tick(y0, opt.logy)) << '\n';
  os << fmt::format(fmt::runtime(text), ml - 6, mt + 12, "end", tick(y1, opt.logy)) << '\n';
  os << fmt::format(fmt::runtime(text), ml + pw / 2, double(opt.height) - 12, "middle", escape(opt.xlabel)) << '\n';
  os << fmt::format(R"(<text x="16" y="{:.1f}" text-anchor="middle" font-size="12" font-family="sans-serif" )"
                    R"svg(transform="rotate(-90 16 {:.1f})">{}</text>)svg",
                    mt + ph / 2, mt + ph / 2, escape(opt.ylabel))
     << '\n';
  if (!pts.empty()) {
    os << R"(<polyline fill="none" stroke="#1f77b4" stroke-width="2" points=")";
    for (std::size_t i = 0; i < pts.size(); ++i)
      os << (i ? " " : "") << fmt::format("{:.2f},{:.2f}", px(pts[i].first), py(pts[i].second));
    os << "\"/>\n";
    for (const auto& [a, b] : pts)
      os << fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="3" fill="#1f77b4"/>)", px(a), py(b)) << '\n';
  }
  os << "</svg>\n";
}

void ensure_directory(const std::filesystem::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  fill(out);
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

}  // namespace hyperrelax
