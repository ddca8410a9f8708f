#ifndef H2PC_DATASET_HPP
#define H2PC_DATASET_HPP

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace h2pc {

using Level = std::int32_t;
/// n × d matrix of level indices, column-major so each variable is contiguous.
using LevelMatrix = Eigen::Matrix<Level, Eigen::Dynamic, Eigen::Dynamic>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Variable {
    std::string name;
    /// Tokens in level order; arity is levels.size().
    std::vector<std::string> levels;

    int arity() const { return static_cast<int>(levels.size()); }

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Immutable table of discrete variables.
class CategoricalDataset {
public:
    CategoricalDataset() = default;
    /// Validates that every cell is a valid level of its column.
    CategoricalDataset(std::vector<Variable> variables, LevelMatrix cells);

    int n() const { return static_cast<int>(cells_.rows()); }
    int d() const { return static_cast<int>(cells_.cols()); }

    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(int j) const { return variables_[j]; }
    const std::string& name(int j) const { return variables_[j].name; }
    int arity(int j) const { return variables_[j].arity(); }
    /// Column index for a name; throws DataError if absent.
    int index_of(const std::string& name) const;

    Level operator()(int row, int col) const { return cells_(row, col); }
    const LevelMatrix& cells() const { return cells_; }
    auto column(int j) const { return cells_.col(j); }

    CategoricalDataset select_rows(std::span<const int> rows) const;
    CategoricalDataset select_columns(std::span<const int> cols) const;

private:
    std::vector<Variable> variables_;
    LevelMatrix cells_;
};

struct CsvOptions {
    char delimiter = ',';
    bool header = true;
};

/// Raw tokens, before any level mapping.
struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

TextTable read_table(std::istream& in, const CsvOptions& options = {});
TextTable read_table(const std::filesystem::path& path, const CsvOptions& options = {});

/// Maps tokens to levels in first-appearance order. Rejects constant columns.
CategoricalDataset from_table(const TextTable& table);

/// Maps tokens through an existing schema (columns matched by name, in schema
/// order). Unknown tokens are errors; constant columns are allowed.
CategoricalDataset from_table(const TextTable& table, std::span<const Variable> schema);

CategoricalDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
CategoricalDataset read_csv(std::istream& in, const CsvOptions& options = {});

/// Writes level tokens with a header row of variable names.
void write_csv(std::ostream& out, const CategoricalDataset& data, char delimiter = ',');
void write_csv(const std::filesystem::path& path, const CategoricalDataset& data, char delimiter = ',');

/// Median of the values (mean of the two middle values for even counts).
double median(std::span<const double> values);

/// Values at or below the threshold map to 0, the rest to 1.
/// Throws DataError when the split would leave a constant column.
std::vector<Level> split_at(std::span<const double> values, double threshold);

/// Median split: values ≤ median → 0, else → 1.
std::vector<Level> binarize_continuous(std::span<const double> values);

/// True when every token of the column parses as a finite number.
bool is_numeric_column(const TextTable& table, int col);
std::vector<double> numeric_column(const TextTable& table, int col);

/// Joint counts of (X, Y) under each observed configuration of Z.
struct ContingencyTable {
    int r = 0;
    int c = 0;
    /// One r × c matrix per observed Z configuration, ordered by mixed-radix key.
    std::vector<CountMatrix> strata;
    std::int64_t n = 0;

    int l() const { return static_cast<int>(strata.size()); }
    std::int64_t count(int i, int j, int k) const { return strata[k](i, j); }
};

/// Builds the contingency table of x and y over the observed strata of z.
/// Requires x != y and neither in z.
ContingencyTable contingency(const CategoricalDataset& data, int x, int y, std::span<const int> z);

/// Mixed-radix code of each row's configuration over `vars` (first var slowest).
/// Returns the number of nominal configurations as a double (it may overflow integers).
double configuration_codes(const CategoricalDataset& data, std::span<const int> vars,
                           std::vector<std::uint64_t>& codes);

struct FoldAssignment {
    int k = 0;
    std::vector<int> fold_of_row;

    std::vector<int> test_rows(int fold) const;
    std::vector<int> train_rows(int fold) const;
};

/// Random partition into k folds whose sizes differ by at most one.
FoldAssignment kfold(int n, int k, std::uint64_t seed);

}  // namespace h2pc

#endif  // H2PC_DATASET_HPP
