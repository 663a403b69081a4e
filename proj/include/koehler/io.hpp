#ifndef KOEHLER_IO_HPP_
#define KOEHLER_IO_HPP_

#include <set>
#include <string>

#include "json.hpp"
#include "koehler/linalg.hpp"
#include "koehler/semigroup.hpp"

namespace koehler {

/// {"dim": n, "entries": [[...]]}; entries are plain numbers for real
/// matrices or {"re": x, "im": y} objects.
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);

/// Real matrices as comma-separated rows, one row per line.
CMatrix matrix_from_csv(const std::string& text);

/// Dispatches on the file extension (.json or .csv).
CMatrix load_matrix_file(const std::string& path);

/// Semigroup input: one of
///   {"size": m, "cayley": [[...]]}
///   {"transformations": [[images, 0-based], ...]}
///   {"boolean_matrices": [[[0,1],[1,0]], ...]}
///   {"matrices": [matrix, ...], "epsilon": e}
FiniteSemigroup semigroup_from_json(const nlohmann::json& j,
                                    double default_epsilon = 1e-9);
nlohmann::json cayley_to_json(const FiniteSemigroup& s);

std::set<long long> int_set_from_json(const nlohmann::json& j);

std::string read_file(const std::string& path);

}  // namespace koehler

#endif  // KOEHLER_IO_HPP_
