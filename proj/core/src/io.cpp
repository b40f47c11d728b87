#include "srp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "srp/errors.hpp"

namespace srp {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& message) {
  throw ValidationError(path + " line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& path, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) fail(path, line, "trailing characters in number '" + field + "'");
    return v;
  } catch (const std::exception&) {
    fail(path, line, "cannot parse number '" + field + "'");
  }
}

long parse_long(const std::string& path, int line, const std::string& field) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail(path, line, "cannot parse integer '" + field + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path, int* first_line) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int line_no = 0;
  *first_line = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (*first_line < 0) *first_line = line_no;
    rows.push_back(split_csv_line(trimmed));
    rows.back().push_back(std::to_string(line_no));  // carry the line number
  }
  return rows;
}

int row_line(std::vector<std::string>& row) {
  const int line = static_cast<int>(std::stol(row.back()));
  row.pop_back();
  return line;
}

}  // namespace

std::vector<Budget> read_budgets_csv(const std::string& path) {
  int header_line = 0;
  auto rows = read_rows(path, &header_line);
  if (rows.size() < 2) throw ValidationError(path + ": expected a header and at least one budget");
  auto header = rows.front();
  row_line(header);
  if (header.size() < 4 || header.front() != "period" || header.back() != "expenditure") {
    fail(path, header_line, "expected header period,p1,...,pL,expenditure");
  }
  const int dim = static_cast<int>(header.size()) - 2;

  std::vector<Budget> budgets;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& row = rows[r];
    const int line = row_line(row);
    if (static_cast<int>(row.size()) != dim + 2) fail(path, line, "wrong field count");
    Budget b;
    b.period = static_cast<int>(parse_long(path, line, row[0]));
    b.prices.resize(dim);
    for (int l = 0; l < dim; ++l) b.prices[l] = parse_double(path, line, row[static_cast<std::size_t>(l) + 1]);
    b.expenditure = parse_double(path, line, row.back());
    budgets.push_back(std::move(b));
  }
  return budgets;
}

std::vector<Observation> read_observations_csv(const std::string& path) {
  int header_line = 0;
  auto rows = read_rows(path, &header_line);
  if (rows.size() < 2) throw ValidationError(path + ": expected a header and at least one row");
  auto header = rows.front();
  row_line(header);
  if (header.size() < 4 || header[0] != "period" || header[1] != "household_id") {
    fail(path, header_line, "expected header period,household_id,q1,...,qL");
  }
  const int dim = static_cast<int>(header.size()) - 2;

  std::vector<Observation> observations;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& row = rows[r];
    const int line = row_line(row);
    if (static_cast<int>(row.size()) != dim + 2) fail(path, line, "wrong field count");
    Observation obs;
    obs.period = static_cast<int>(parse_long(path, line, row[0]));
    obs.bundle.resize(dim);
    for (int l = 0; l < dim; ++l) obs.bundle[l] = parse_double(path, line, row[static_cast<std::size_t>(l) + 2]);
    observations.push_back(std::move(obs));
  }
  return observations;
}

void write_observations_csv(const std::string& path, const std::vector<Observation>& observations) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  const int dim = observations.empty() ? 0 : static_cast<int>(observations.front().bundle.size());
  out << "period,household_id";
  for (int l = 1; l <= dim; ++l) out << ",q" << l;
  out << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    out << observations[i].period << "," << i + 1;
    for (int l = 0; l < dim; ++l) out << "," << observations[i].bundle[l];
    out << "\n";
  }
}

DemandSeries read_series_csv(const std::string& path) {
  int header_line = 0;
  auto rows = read_rows(path, &header_line);
  if (rows.size() < 2) throw ValidationError(path + ": expected a header and at least one row");
  auto header = rows.front();
  row_line(header);
  if (header.size() < 5 || header[0] != "period" || ((header.size() - 1) % 2) != 0) {
    fail(path, header_line, "expected header period,p1,...,pL,q1,...,qL");
  }
  const int dim = static_cast<int>(header.size() - 1) / 2;

  DemandSeries series;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& row = rows[r];
    const int line = row_line(row);
    if (static_cast<int>(row.size()) != 2 * dim + 1) fail(path, line, "wrong field count");
    DemandObservation obs;
    obs.period = static_cast<int>(parse_long(path, line, row[0]));
    obs.prices.resize(dim);
    obs.bundle.resize(dim);
    for (int l = 0; l < dim; ++l) {
      obs.prices[l] = parse_double(path, line, row[static_cast<std::size_t>(l) + 1]);
      obs.bundle[l] = parse_double(path, line, row[static_cast<std::size_t>(l) + 1 + dim]);
    }
    series.push_back(std::move(obs));
  }
  return series;
}

GammaCsv read_gamma_csv(const std::string& path) {
  int header_line = 0;
  auto rows = read_rows(path, &header_line);
  if (rows.empty()) throw ValidationError(path + ": empty type matrix file");
  auto header = rows.front();
  const int line0 = row_line(header);
  if (header.size() != 2) fail(path, line0, "expected the dimension line d_rho,H");
  GammaCsv out;
  out.d_rho = static_cast<int>(parse_long(path, line0, header[0]));
  out.h = parse_long(path, line0, header[1]);
  if (static_cast<int>(rows.size()) - 1 != out.d_rho) {
    throw ValidationError(path + ": expected " + std::to_string(out.d_rho) + " matrix rows");
  }
  out.matrix.resize(out.d_rho, out.h);
  for (int i = 0; i < out.d_rho; ++i) {
    auto& row = rows[static_cast<std::size_t>(i) + 1];
    const int line = row_line(row);
    if (static_cast<std::int64_t>(row.size()) != out.h) fail(path, line, "wrong entry count");
    for (std::int64_t j = 0; j < out.h; ++j) {
      const long v = parse_long(path, line, row[static_cast<std::size_t>(j)]);
      if (v != 0 && v != 1) fail(path, line, "entries must be 0 or 1");
      out.matrix(i, j) = static_cast<double>(v);
    }
  }
  return out;
}

void write_gamma_csv(const std::string& path, const Eigen::MatrixXd& gamma) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << gamma.rows() << "," << gamma.cols() << "\n";
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
      out << (gamma(i, j) != 0.0 ? 1 : 0) << (j + 1 == gamma.cols() ? '\n' : ',');
    }
  }
}

void write_gamma_csv(const std::string& path, const TypeMatrix& types) {
  write_gamma_csv(path, types.dense());
}

RhoCsv read_rho_csv(const std::string& path) {
  int header_line = 0;
  auto rows = read_rows(path, &header_line);
  if (rows.size() < 2) throw ValidationError(path + ": expected a header and at least one row");
  auto header = rows.front();
  row_line(header);
  if (header.size() != 3 || header[0] != "period") {
    fail(path, header_line, "expected header period,local_index,probability");
  }

  RhoCsv out;
  std::vector<double> probs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& row = rows[r];
    const int line = row_line(row);
    if (row.size() != 3) fail(path, line, "wrong field count");
    const int period = static_cast<int>(parse_long(path, line, row[0]));
    const long local = parse_long(path, line, row[1]);
    const double p = parse_double(path, line, row[2]);
    if (out.periods.empty() || out.periods.back() != period) {
      for (int seen : out.periods) {
        if (seen == period) fail(path, line, "period blocks must be contiguous");
      }
      out.periods.push_back(period);
      out.block_sizes.push_back(0);
    }
    if (local != out.block_sizes.back()) fail(path, line, "local_index must count up from 0");
    ++out.block_sizes.back();
    probs.push_back(p);
  }
  out.probs = Eigen::Map<Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  return out;
}

void write_rho_csv(const std::string& path, const StochasticChoiceVector& rho,
                   const std::vector<int>& periods) {
  if (periods.size() != rho.block_sizes.size()) {
    throw ValidationError("write_rho_csv: one period per block required");
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "period,local_index,probability\n";
  out.precision(17);
  int row = 0;
  for (std::size_t t = 0; t < rho.block_sizes.size(); ++t) {
    for (int i = 0; i < rho.block_sizes[t]; ++i) {
      out << periods[t] << "," << i << "," << rho.probs[row++] << "\n";
    }
  }
}

namespace {

template <typename T>
void write_raw(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ValidationError(path + ": truncated type matrix file");
  return value;
}

}  // namespace

void write_gamma_binary(const std::string& path, const TypeMatrix& types,
                        const PatchPartition& partition) {
  if (partition.block_sizes() != types.patches_per_budget()) {
    throw ValidationError("write_gamma_binary: partition does not match the type matrix");
  }
  if (partition.num_budgets() > 64) {
    throw ValidationError("write_gamma_binary: sign bitmask supports at most 64 budgets");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out.write("SRPG", 4);
  write_raw<std::uint32_t>(out, 1);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(types.rows()));
  write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(types.columns()));
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(types.num_budgets()));
  for (int t = 0; t < partition.num_budgets(); ++t) {
    write_raw<std::int32_t>(out, partition.budget(t).period);
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(partition.patches_in(t)));
    for (const Patch& patch : partition.patches_of(t)) {
      std::uint64_t bits = 0;
      for (int s = 0; s < partition.num_budgets(); ++s) {
        if (s != t && patch.side_wrt(s) == Side::Above) bits |= (1ULL << s);
      }
      write_raw<std::uint64_t>(out, bits);
    }
  }
  for (std::int64_t col = 0; col < types.columns(); ++col) {
    for (int t = 0; t < types.num_budgets(); ++t) {
      write_raw<std::uint16_t>(out, types.choice(col, t));
    }
  }
}

GammaBinary read_gamma_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "SRPG") {
    throw ValidationError(path + ": not a type matrix file");
  }
  const auto version = read_raw<std::uint32_t>(in, path);
  if (version != 1) throw ValidationError(path + ": unsupported format version");
  const auto d_rho = read_raw<std::uint32_t>(in, path);
  const auto h = read_raw<std::uint64_t>(in, path);
  const auto num_budgets = read_raw<std::uint32_t>(in, path);

  GammaBinary out;
  std::vector<int> block_sizes;
  std::uint32_t rows_seen = 0;
  for (std::uint32_t t = 0; t < num_budgets; ++t) {
    out.periods.push_back(read_raw<std::int32_t>(in, path));
    const auto count = read_raw<std::uint32_t>(in, path);
    block_sizes.push_back(static_cast<int>(count));
    rows_seen += count;
    std::vector<std::uint64_t> bits;
    for (std::uint32_t i = 0; i < count; ++i) bits.push_back(read_raw<std::uint64_t>(in, path));
    out.sign_bits.push_back(std::move(bits));
  }
  if (rows_seen != d_rho) throw ValidationError(path + ": row blocks do not add up");

  out.types = TypeMatrix(Axiom::Warp, block_sizes);
  std::vector<std::uint16_t> choice(num_budgets);
  for (std::uint64_t col = 0; col < h; ++col) {
    for (std::uint32_t t = 0; t < num_budgets; ++t) {
      choice[t] = read_raw<std::uint16_t>(in, path);
      if (choice[t] >= static_cast<std::uint16_t>(block_sizes[t])) {
        throw ValidationError(path + ": patch choice out of range");
      }
    }
    out.types.append_column(choice);
  }
  return out;
}

}  // namespace srp
