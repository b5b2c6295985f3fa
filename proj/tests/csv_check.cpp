// Small checks on CSV output for the CLI tests.
//   csv_check affine <file> <slope> <offset> <tol>      columns x,u
//   csv_check maxabs <file> <column> <expected> <tol>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 6) {
    std::cerr << "usage: csv_check affine|maxabs <file> <a> <b> <tol>\n";
    return 2;
  }
  const std::string mode = argv[1];
  std::ifstream in(argv[2]);
  std::string line;
  if (!in || !std::getline(in, line)) {
    std::cerr << "cannot read " << argv[2] << '\n';
    return 2;
  }
  const auto header = split(line);
  const double tol = std::atof(argv[5]);
  if (mode == "affine") {
    const double a = std::atof(argv[3]), b = std::atof(argv[4]);
    double worst = 0.0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      const auto c = split(line);
      const double x = std::strtod(c.at(0).c_str(), nullptr), u = std::strtod(c.at(1).c_str(), nullptr);
      worst = std::max(worst, std::abs(u - (a * x + b)));
      ++rows;
    }
    std::cout << rows << " rows, max deviation " << worst << '\n';
    return rows > 0 && worst <= tol ? 0 : 1;
  }
  if (mode == "maxabs") {
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == argv[3]) col = i;
    if (col == header.size()) {
      std::cerr << "no column " << argv[3] << '\n';
      return 2;
    }
    const double expected = std::atof(argv[4]);
    double m = 0.0;
    while (std::getline(in, line)) m = std::max(m, std::abs(std::strtod(split(line).at(col).c_str(), nullptr)));
    std::printf("max |%s| = %.17g\n", argv[3], m);
    return std::abs(m - expected) <= tol ? 0 : 1;
  }
  std::cerr << "unknown mode " << mode << '\n';
  return 2;
}
