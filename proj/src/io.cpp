#include "koehler/io.hpp"

#include <fstream>
#include <sstream>

namespace koehler {

namespace {

Complex entry_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_object() && j.contains("re")) {
    return Complex(j["re"].get<double>(),
                   j.value("im", 0.0));
  }
  throw InvalidInput("matrix entry must be a number or {\"re\", \"im\"}");
}

}  // namespace

CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw InvalidInput("matrix JSON needs \"dim\" and \"entries\"");
  }
  const Eigen::Index n = j["dim"].get<Eigen::Index>();
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw InvalidInput("matrix entries must hold dim rows");
  }
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidInput("matrix rows must hold dim entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)]);
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json j;
  j["dim"] = m.rows();
  j["entries"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back({{"re", m(i, k).real()}, {"im", m(i, k).imag()}});
    }
    j["entries"].push_back(std::move(row));
  }
  return j;
}

CMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidInput("CSV cell is not a number: '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("CSV matrix is empty");
  const std::size_t n = rows.size();
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw InvalidInput("CSV matrix must be square");
    }
    for (std::size_t k = 0; k < n; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rows[i][k];
    }
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CMatrix load_matrix_file(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return matrix_from_csv(text);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

FiniteSemigroup semigroup_from_json(const nlohmann::json& j,
                                    double default_epsilon) {
  if (!j.is_object()) throw InvalidInput("semigroup JSON must be an object");
  if (j.contains("cayley")) {
    return from_cayley_table(
        j["cayley"].get<std::vector<std::vector<int>>>());
  }
  if (j.contains("transformations")) {
    return generate_transformation_semigroup(
        j["transformations"].get<std::vector<Transformation>>());
  }
  if (j.contains("boolean_matrices")) {
    std::vector<BoolMatrix> gens;
    for (const auto& rows : j["boolean_matrices"]) {
      BoolMatrix m;
      m.k = static_cast<int>(rows.size());
      for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != m.k) {
          throw InvalidInput("boolean matrices must be square");
        }
        std::uint32_t bits = 0;
        for (int c = 0; c < m.k; ++c) {
          if (row[static_cast<std::size_t>(c)].get<int>() != 0) {
            bits |= (1u << c);
          }
        }
        m.rows.push_back(bits);
      }
      gens.push_back(std::move(m));
    }
    return generate_boolean_matrix_semigroup(gens);
  }
  if (j.contains("matrices")) {
    std::vector<CMatrix> gens;
    for (const auto& mj : j["matrices"]) gens.push_back(matrix_from_json(mj));
    return generate_matrix_semigroup(gens,
                                     j.value("epsilon", default_epsilon));
  }
  throw InvalidInput(
      "semigroup JSON needs one of: cayley, transformations, "
      "boolean_matrices, matrices");
}

nlohmann::json cayley_to_json(const FiniteSemigroup& s) {
  nlohmann::json j;
  j["size"] = s.size;
  j["cayley"] = s.cayley;
  return j;
}

std::set<long long> int_set_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("integer set must be a JSON array");
  std::set<long long> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw InvalidInput("integer set entries must be integers");
    }
    out.insert(v.get<long long>());
  }
  return out;
}

}  // namespace koehler
