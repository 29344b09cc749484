#include "rjmix/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rjmix/errors.hpp"

namespace rjmix {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(strip(cur));
  return fields;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open data file: " + path);
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string tok = strip(line);
    if (tok.empty()) continue;
    double v;
    if (!parse_double(tok, v)) {
      if (first_content_line) {  // header
        first_content_line = false;
        continue;
      }
      throw invalid_input(path + " line " + std::to_string(line_no) +
                          ": cannot parse '" + tok + "' as a number");
    }
    first_content_line = false;
    values.push_back(v);
  }
  if (values.empty())
    throw invalid_input(path + ": no observations found");
  return Dataset(std::move(values));
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::string& header) {
  std::ostringstream out;
  if (!header.empty()) out << header << "\n";
  for (double v : data.values) out << format_double(v) << "\n";
  write_text_file(path, out.str());
}

std::string chain_to_csv(const Chain& chain) {
  std::ostringstream out;
  out << "sweep,k,param,component,value\n";
  for (std::size_t i = 0; i < chain.records.size(); ++i) {
    const MixtureState& s = chain.records[i];
    const long sweep = i < chain.sweeps.size() ? chain.sweeps[i] : static_cast<long>(i + 1);
    const std::string prefix = std::to_string(sweep) + "," + std::to_string(s.k) + ",";
    for (int j = 0; j < s.k; ++j)
      out << prefix << "w," << j + 1 << "," << format_double(s.w[j]) << "\n";
    for (int j = 0; j < s.k; ++j)
      out << prefix << "mu," << j + 1 << "," << format_double(s.mu[j]) << "\n";
    for (int j = 0; j < s.k; ++j)
      out << prefix << "sigma2," << j + 1 << "," << format_double(s.sigma2[j]) << "\n";
    out << prefix << "beta,0," << format_double(s.beta) << "\n";
    const double ll = i < chain.log_liks.size() ? chain.log_liks[i] : 0.0;
    out << prefix << "loglik,0," << format_double(ll) << "\n";
  }
  return out.str();
}

void write_chain_csv(const std::string& path, const Chain& chain) {
  write_text_file(path, chain_to_csv(chain));
}

Chain read_chain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open chain file: " + path);

  Chain chain;
  std::string line;
  long line_no = 0;
  long cur_sweep = -1;

  auto fail = [&](const std::string& what) {
    throw invalid_input(path + " line " + std::to_string(line_no) + ": " + what);
  };

  MixtureState cur;
  double cur_ll = 0.0;
  bool have_record = false;

  auto flush = [&]() {
    if (!have_record) return;
    if (static_cast<int>(cur.w.size()) != cur.k ||
        static_cast<int>(cur.mu.size()) != cur.k ||
        static_cast<int>(cur.sigma2.size()) != cur.k)
      fail("incomplete record for sweep " + std::to_string(cur_sweep));
    chain.records.push_back(cur);
    chain.sweeps.push_back(cur_sweep);
    chain.log_liks.push_back(cur_ll);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = strip(line);
    if (content.empty()) continue;
    if (line_no == 1) {
      if (content != "sweep,k,param,component,value")
        fail("unexpected header '" + content + "'");
      continue;
    }
    const auto f = split_csv_line(content);
    if (f.size() != 5) fail("expected 5 fields, got " + std::to_string(f.size()));
    double sweep_d, k_d, comp_d, value;
    if (!parse_double(f[0], sweep_d)) fail("bad sweep '" + f[0] + "'");
    if (!parse_double(f[1], k_d)) fail("bad k '" + f[1] + "'");
    if (!parse_double(f[3], comp_d)) fail("bad component '" + f[3] + "'");
    if (!parse_double(f[4], value)) fail("bad value '" + f[4] + "'");
    const long sweep = static_cast<long>(sweep_d);
    const int k = static_cast<int>(k_d);
    const int comp = static_cast<int>(comp_d);

    if (sweep != cur_sweep) {
      flush();
      cur = MixtureState{};
      cur.k = k;
      cur.beta = 1.0;
      cur_ll = 0.0;
      cur_sweep = sweep;
      have_record = true;
    }
    if (k != cur.k) fail("k changed within sweep " + std::to_string(sweep));

    const std::string& param = f[2];
    if (param == "w" || param == "mu" || param == "sigma2") {
      if (comp < 1 || comp > k) fail("component out of range");
      auto& vec = param == "w" ? cur.w : param == "mu" ? cur.mu : cur.sigma2;
      if (static_cast<int>(vec.size()) != comp - 1) fail("components out of order");
      vec.push_back(value);
    } else if (param == "beta") {
      cur.beta = value;
    } else if (param == "loglik") {
      cur_ll = value;
    } else {
      fail("unknown param '" + param + "'");
    }
  }
  flush();
  if (chain.records.empty()) throw invalid_input(path + ": no records found");
  chain.fixed_k = chain.all_same_k();
  if (chain.fixed_k) chain.fixed_k_value = chain.records.front().k;
  return chain;
}

void write_xy_csv(const std::string& path, const std::string& header,
                  std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw invalid_input("write_xy_csv: length mismatch");
  std::ostringstream out;
  out << header << "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(x[i]) << "," << format_double(y[i]) << "\n";
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write file: " + path);
  out << content;
  if (!out) throw invalid_input("write failed: " + path);
}

}  // namespace rjmix
