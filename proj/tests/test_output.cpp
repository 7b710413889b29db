#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyperrelax/output.hpp"

using namespace hyperrelax;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("svg plot contains one marker per drawable point") {
  PlotOptions o;
  o.title = "a < b";
  o.logy = true;
  std::ostringstream os;
  write_svg_line_plot(os, {1.0, 2.0, 3.0, 4.0}, {1e-2, -1.0, NAN, 1e-4}, o);
  const std::string s = os.str();
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(count(s, "<circle") == 2);
  CHECK(s.find("a &lt; b") != std::string::npos);
  CHECK(count(s, "<polyline") == 1);
  std::ostringstream empty;
  write_svg_line_plot(empty, {}, {}, o);
  CHECK(count(empty.str(), "<polyline") == 0);
  CHECK_THROWS(write_svg_line_plot(empty, {1.0}, {}, o));
}

TEST_CASE("files are written below created directories") {
  const auto dir = std::filesystem::temp_directory_path() / "hyperrelax_output_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  ensure_directory(dir);
  write_file(dir / "x.txt", [](std::ostream& os) { os << "42\n"; });
  std::ifstream in(dir / "x.txt");
  std::string line;
  std::getline(in, line);
  CHECK(line == "42");
  CHECK_THROWS(write_file(dir / "missing" / "y.txt", [](std::ostream&) {}));
  std::filesystem::remove_all(dir.parent_path());
}
