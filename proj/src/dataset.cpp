#include "robsvm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "robsvm/rng.hpp"

namespace robsvm {

void Dataset::validate() const {
  require(features.rows() >= 1 && features.cols() >= 1, ErrorCode::EmptyDataset,
          "dataset must have at least one row and one feature");
  require(labels.size() == features.rows(), ErrorCode::DimensionMismatch,
          "label count does not match row count");
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    require(labels[i] == 1.0 || labels[i] == -1.0, ErrorCode::BadLabel,
            "labels must be -1 or +1");
  require(features.allFinite(), ErrorCode::MalformedCell,
          "features contain NaN or Inf");
}

bool Dataset::has_both_classes() const {
  bool pos = false, neg = false;
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    (labels[i] > 0 ? pos : neg) = true;
  return pos && neg;
}

Eigen::MatrixXd RescaleParams::apply(const Eigen::MatrixXd& X) const {
  if (is_identity()) return X;
  require(X.cols() == min.size(), ErrorCode::DimensionMismatch,
          "rescale params fitted on different dimension");
  Eigen::MatrixXd out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double lo = min[j], hi = max[j];
    if (hi > lo) {
      out.col(j) = (X.col(j).array() - lo) * (2.0 / (hi - lo)) - 1.0;
    } else {
      out.col(j).setZero();  // constant feature convention
    }
  }
  return out;
}

Eigen::Index ceil_count(double x) {
  return static_cast<Eigen::Index>(std::ceil(x - 1e-9));
}

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, const std::string& context) {
  std::string cell = trim(raw);
  if (cell.empty())
    fail(ErrorCode::MissingValue, "missing value " + context);
  size_t used = 0;
  double v;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::MalformedCell, "unparseable cell '" + cell + "' " + context);
  }
  if (used != cell.size())
    fail(ErrorCode::MalformedCell, "trailing garbage in cell '" + cell + "' " + context);
  if (!std::isfinite(v))
    fail(ErrorCode::MalformedCell, "non-finite cell '" + cell + "' " + context);
  return v;
}

// maps the two distinct raw label strings onto -1/+1
double map_label(const std::string& raw, const std::string& neg,
                 const std::string& pos) {
  if (raw == pos) return 1.0;
  if (raw == neg) return -1.0;
  fail(ErrorCode::BadLabel, "unexpected label '" + raw + "'");
}

}  // namespace

Eigen::Index CsvTable::column(const std::string& name) const {
  for (size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return static_cast<Eigen::Index>(j);
  fail(ErrorCode::MissingValue, "column '" + name + "' not found");
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::EmptyDataset, "'" + path + "' is empty");
  for (auto& h : split_line(line, ',')) table.header.push_back(trim(h));
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(line, ',');
    if (cells.size() != table.header.size())
      fail(ErrorCode::MalformedCell,
           "line " + std::to_string(lineno) + " has " +
               std::to_string(cells.size()) + " cells, expected " +
               std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
  CsvTable table = read_csv_table(path);
  const Eigen::Index label_col = table.column(label_column);
  if (table.rows.empty())
    fail(ErrorCode::EmptyDataset, "'" + path + "' has a header but no rows");

  // collect distinct raw label values
  std::set<std::string> values;
  for (const auto& row : table.rows)
    values.insert(trim(row[static_cast<size_t>(label_col)]));
  if (values.size() > 2)
    fail(ErrorCode::TooManyLabelValues,
         "label column has " + std::to_string(values.size()) + " distinct values");
  if (values.size() < 2)
    fail(ErrorCode::SingleClass, "label column has a single distinct value");

  std::string neg = *values.begin(), pos = *std::next(values.begin());
  // numeric special cases {0,1} and {-1,+1}; otherwise lexicographic order
  // (std::set iteration) already puts the larger value second
  auto is_num = [](const std::string& s, double want) {
    try {
      size_t used = 0;
      double v = std::stod(s, &used);
      return used == s.size() && v == want;
    } catch (const std::exception&) {
      return false;
    }
  };
  if ((is_num(neg, 0) && is_num(pos, 1)) || (is_num(neg, 1) && is_num(pos, 0))) {
    if (is_num(neg, 1)) std::swap(neg, pos);
  } else if ((is_num(neg, -1) && is_num(pos, 1)) ||
             (is_num(neg, 1) && is_num(pos, -1))) {
    if (is_num(neg, 1)) std::swap(neg, pos);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(table.header.size()) - 1;
  require(d >= 1, ErrorCode::EmptyDataset, "no feature columns");

  Dataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(table.header.size()); ++j)
    if (j != label_col) ds.feature_names.push_back(table.header[static_cast<size_t>(j)]);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    ds.labels[i] = map_label(trim(row[static_cast<size_t>(label_col)]), neg, pos);
    Eigen::Index out = 0;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(row.size()); ++j) {
      if (j == label_col) continue;
      ds.features(i, out++) = parse_cell(
          row[static_cast<size_t>(j)],
          "(row " + std::to_string(i + 2) + ", column '" +
              table.header[static_cast<size_t>(j)] + "')");
    }
  }
  ds.validate();
  return ds;
}

Dataset load_libsvm(const std::string& path, std::optional<Eigen::Index> dimension) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open '" + path + "'");

  std::vector<double> labels;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
  Eigen::Index max_index = 0;

  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    std::string ctx = "(line " + std::to_string(lineno) + ")";
    double raw = parse_cell(tok, ctx);
    if (raw != 1.0 && raw != -1.0 && raw != 0.0)
      fail(ErrorCode::BadLabel, "label '" + tok + "' not in {-1,0,+1} " + ctx);
    labels.push_back(raw == 1.0 ? 1.0 : -1.0);  // {0,1} sources map 0 -> -1

    std::vector<std::pair<Eigen::Index, double>> entries;
    Eigen::Index prev = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        fail(ErrorCode::MalformedCell, "expected idx:value, got '" + tok + "' " + ctx);
      Eigen::Index idx;
      try {
        idx = static_cast<Eigen::Index>(std::stoll(tok.substr(0, colon)));
      } catch (const std::exception&) {
        fail(ErrorCode::MalformedCell, "bad index in '" + tok + "' " + ctx);
      }
      if (idx <= prev)
        fail(ErrorCode::NonMonotoneIndex,
             "indices must be 1-based strictly increasing " + ctx);
      if (dimension && idx > *dimension)
        fail(ErrorCode::IndexOutOfRange,
             "index " + std::to_string(idx) + " exceeds declared dimension " + ctx);
      double v = parse_cell(tok.substr(colon + 1), ctx);
      entries.emplace_back(idx, v);
      prev = idx;
    }
    max_index = std::max(max_index, prev);
    rows.push_back(std::move(entries));
  }

  if (rows.empty()) fail(ErrorCode::EmptyDataset, "'" + path + "' has no examples");

  const Eigen::Index d = dimension.value_or(max_index);
  require(d >= 1, ErrorCode::EmptyDataset, "no feature present and no dimension given");

  Dataset ds;
  ds.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d);
  ds.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    ds.labels[static_cast<Eigen::Index>(i)] = labels[i];
    for (auto& [idx, v] : rows[i])
      ds.features(static_cast<Eigen::Index>(i), idx - 1) = v;
  }
  ds.validate();
  return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::MissingFile, "cannot write '" + path + "'");
  char buf[64];
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    out << (ds.labels[i] > 0 ? "+1" : "-1");
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      const double v = ds.features(i, j);
      if (v == 0.0) continue;  // sparse format, zeros implied
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ' ' << (j + 1) << ':' << buf;
    }
    out << '\n';
  }
}

std::pair<Dataset, RescaleParams> rescale_to_unit_range(const Dataset& ds) {
  ds.validate();
  RescaleParams params;
  params.min = ds.features.colwise().minCoeff();
  params.max = ds.features.colwise().maxCoeff();
  Dataset out = ds;
  out.features = params.apply(ds.features);
  return {std::move(out), std::move(params)};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  ds.validate();
  require(ds.n() >= 2, ErrorCode::EmptyDataset, "need at least 2 rows to split");
  require(spec.train_fraction > 0.0 && spec.train_fraction < 1.0,
          ErrorCode::InvalidArgument, "train_fraction must be in (0,1)");

  const Eigen::Index n = ds.n();
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(spec.seed);
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    Eigen::Index j = i + static_cast<Eigen::Index>(
                             rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }

  const Eigen::Index n_train =
      std::min(n - 1, std::max<Eigen::Index>(1, ceil_count(spec.train_fraction * static_cast<double>(n))));

  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    Dataset part;
    part.features.resize(count, ds.dim());
    part.labels.resize(count);
    part.feature_names = ds.feature_names;
    for (Eigen::Index i = 0; i < count; ++i) {
      part.features.row(i) = ds.features.row(order[static_cast<size_t>(begin + i)]);
      part.labels[i] = ds.labels[order[static_cast<size_t>(begin + i)]];
    }
    return part;
  };
  return {take(0, n_train), take(n_train, n - n_train)};
}

}  // namespace robsvm
