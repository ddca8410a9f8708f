#include <h2pc/dataset.hpp>
#include <h2pc/random.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace h2pc {

CategoricalDataset::CategoricalDataset(std::vector<Variable> variables, LevelMatrix cells)
    : variables_(std::move(variables)), cells_(std::move(cells)) {
    if (static_cast<Eigen::Index>(variables_.size()) != cells_.cols()) {
        throw DataError("dataset has " + std::to_string(cells_.cols()) + " columns but " +
                        std::to_string(variables_.size()) + " variables");
    }
    for (int j = 0; j < d(); ++j) {
        const int r = arity(j);
        if (r < 1) throw DataError("variable '" + name(j) + "' has no levels");
        for (int i = 0; i < n(); ++i) {
            if (cells_(i, j) < 0 || cells_(i, j) >= r) {
                throw DataError("row " + std::to_string(i + 1) + ", variable '" + name(j) +
                                "': level " + std::to_string(cells_(i, j)) + " out of range");
            }
        }
    }
}

int CategoricalDataset::index_of(const std::string& name) const {
    for (int j = 0; j < d(); ++j) {
        if (variables_[j].name == name) return j;
    }
    throw DataError("unknown variable '" + name + "'");
}

CategoricalDataset CategoricalDataset::select_rows(std::span<const int> rows) const {
    LevelMatrix sub(static_cast<Eigen::Index>(rows.size()), cells_.cols());
    for (Eigen::Index i = 0; i < sub.rows(); ++i) sub.row(i) = cells_.row(rows[i]);
    CategoricalDataset out;
    out.variables_ = variables_;
    out.cells_ = std::move(sub);
    return out;
}

CategoricalDataset CategoricalDataset::select_columns(std::span<const int> cols) const {
    LevelMatrix sub(cells_.rows(), static_cast<Eigen::Index>(cols.size()));
    std::vector<Variable> vars;
    vars.reserve(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
        sub.col(static_cast<Eigen::Index>(k)) = cells_.col(cols[k]);
        vars.push_back(variables_[cols[k]]);
    }
    CategoricalDataset out;
    out.variables_ = std::move(vars);
    out.cells_ = std::move(sub);
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return fields;
}

bool parse_double(const std::string& token, double& value) {
    const char* first = token.data();
    const char* last = first + token.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

TextTable read_table(std::istream& in, const CsvOptions& options) {
    TextTable table;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_line(line, options.delimiter);
        if (width == 0) {
            width = fields.size();
            if (options.header) {
                table.header = std::move(fields);
                continue;
            }
        }
        if (fields.size() != width) {
            // Rows are numbered as lines of the file, header included.
            throw DataError("ragged row " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                            " fields, got " + std::to_string(fields.size()));
        }
        for (const auto& f : fields) {
            if (f.empty()) {
                throw DataError("missing value on line " + std::to_string(line_no));
            }
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.rows.empty()) throw DataError("empty data file");
    if (table.header.empty()) {
        for (std::size_t j = 0; j < width; ++j) table.header.push_back("V" + std::to_string(j + 1));
    }
    return table;
}

TextTable read_table(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_table(in, options);
}

CategoricalDataset from_table(const TextTable& table) {
    const int d = static_cast<int>(table.header.size());
    const int n = static_cast<int>(table.rows.size());
    std::vector<Variable> vars(d);
    LevelMatrix cells(n, d);
    for (int j = 0; j < d; ++j) {
        vars[j].name = table.header[j];
        std::unordered_map<std::string, Level> index;
        for (int i = 0; i < n; ++i) {
            const auto& tok = table.rows[i][j];
            auto [it, inserted] = index.try_emplace(tok, static_cast<Level>(vars[j].levels.size()));
            if (inserted) vars[j].levels.push_back(tok);
            cells(i, j) = it->second;
        }
        if (vars[j].arity() < 2) {
            throw DataError("constant column '" + vars[j].name + "'");
        }
    }
    return CategoricalDataset(std::move(vars), std::move(cells));
}

CategoricalDataset from_table(const TextTable& table, std::span<const Variable> schema) {
    const int n = static_cast<int>(table.rows.size());
    const int d = static_cast<int>(schema.size());
    LevelMatrix cells(n, d);
    for (int j = 0; j < d; ++j) {
        const auto& var = schema[j];
        const auto it = std::find(table.header.begin(), table.header.end(), var.name);
        if (it == table.header.end()) throw DataError("data has no column '" + var.name + "'");
        const auto col = static_cast<std::size_t>(it - table.header.begin());
        std::unordered_map<std::string, Level> index;
        for (int k = 0; k < var.arity(); ++k) index.emplace(var.levels[k], k);
        for (int i = 0; i < n; ++i) {
            const auto found = index.find(table.rows[i][col]);
            if (found == index.end()) {
                throw DataError("row " + std::to_string(i + 1) + ", column '" + var.name + "': unknown level '" +
                                table.rows[i][col] + "'");
            }
            cells(i, j) = found->second;
        }
    }
    return CategoricalDataset(std::vector<Variable>(schema.begin(), schema.end()), std::move(cells));
}

CategoricalDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    return from_table(read_table(path, options));
}

CategoricalDataset read_csv(std::istream& in, const CsvOptions& options) {
    return from_table(read_table(in, options));
}

void write_csv(std::ostream& out, const CategoricalDataset& data, char delimiter) {
    for (int j = 0; j < data.d(); ++j) {
        if (j) out << delimiter;
        out << data.name(j);
    }
    out << '\n';
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < data.d(); ++j) {
            if (j) out << delimiter;
            out << data.variable(j).levels[data(i, j)];
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const CategoricalDataset& data, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(out, data, delimiter);
}

double median(std::span<const double> values) {
    if (values.empty()) throw DataError("median of an empty column");
    std::vector<double> v(values.begin(), values.end());
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<Level> split_at(std::span<const double> values, double threshold) {
    std::vector<Level> out(values.size());
    bool any_low = false, any_high = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = values[i] <= threshold ? 0 : 1;
        (out[i] ? any_high : any_low) = true;
    }
    if (!(any_low && any_high)) throw DataError("binarization produced a constant column");
    return out;
}

std::vector<Level> binarize_continuous(std::span<const double> values) {
    return split_at(values, median(values));
}

bool is_numeric_column(const TextTable& table, int col) {
    double v;
    return std::all_of(table.rows.begin(), table.rows.end(),
                       [&](const auto& row) { return parse_double(row[col], v); });
}

std::vector<double> numeric_column(const TextTable& table, int col) {
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        double v;
        if (!parse_double(table.rows[i][col], v)) {
            throw DataError("row " + std::to_string(i + 1) + ", column '" + table.header[col] +
                            "': not a number");
        }
        out.push_back(v);
    }
    return out;
}

double configuration_codes(const CategoricalDataset& data, std::span<const int> vars,
                           std::vector<std::uint64_t>& codes) {
    const int n = data.n();
    codes.assign(n, 0);
    double nominal = 1.0;
    std::uint64_t radix_product = 1;
    for (int v : vars) {
        const auto r = static_cast<std::uint64_t>(data.arity(v));
        nominal *= static_cast<double>(r);
        if (radix_product > std::numeric_limits<std::uint64_t>::max() / r) {
            // Re-rank the prefix codes densely; ranks preserve the mixed-radix order.
            std::vector<std::uint64_t> distinct(codes);
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (auto& c : codes) {
                c = static_cast<std::uint64_t>(std::lower_bound(distinct.begin(), distinct.end(), c) -
                                               distinct.begin());
            }
            radix_product = distinct.size();
        }
        const auto col = data.column(v);
        for (int i = 0; i < n; ++i) codes[i] = codes[i] * r + static_cast<std::uint64_t>(col(i));
        radix_product *= r;
    }
    return nominal;
}

ContingencyTable contingency(const CategoricalDataset& data, int x, int y, std::span<const int> z) {
    if (x == y) throw std::invalid_argument("contingency: x and y must differ");
    for (int v : z) {
        if (v == x || v == y) throw std::invalid_argument("contingency: x, y must not be in z");
    }
    ContingencyTable t;
    t.r = data.arity(x);
    t.c = data.arity(y);
    t.n = data.n();
    const auto xs = data.column(x);
    const auto ys = data.column(y);
    if (z.empty()) {
        t.strata.emplace_back(CountMatrix::Zero(t.r, t.c));
        auto& m = t.strata.back();
        for (int i = 0; i < data.n(); ++i) ++m(xs(i), ys(i));
        return t;
    }
    std::vector<std::uint64_t> codes;
    configuration_codes(data, z, codes);
    std::vector<std::uint64_t> keys(codes);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    t.strata.assign(keys.size(), CountMatrix::Zero(t.r, t.c));
    for (int i = 0; i < data.n(); ++i) {
        const auto k = std::lower_bound(keys.begin(), keys.end(), codes[i]) - keys.begin();
        ++t.strata[static_cast<std::size_t>(k)](xs(i), ys(i));
    }
    return t;
}

std::vector<int> FoldAssignment::test_rows(int fold) const {
    std::vector<int> rows;
    for (int i = 0; i < static_cast<int>(fold_of_row.size()); ++i) {
        if (fold_of_row[i] == fold) rows.push_back(i);
    }
    return rows;
}

std::vector<int> FoldAssignment::train_rows(int fold) const {
    std::vector<int> rows;
    for (int i = 0; i < static_cast<int>(fold_of_row.size()); ++i) {
        if (fold_of_row[i] != fold) rows.push_back(i);
    }
    return rows;
}

FoldAssignment kfold(int n, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold: need at least 2 folds");
    if (k > n) throw std::invalid_argument("kfold: more folds than rows");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    shuffle(std::span<int>(order), rng);
    FoldAssignment folds;
    folds.k = k;
    folds.fold_of_row.assign(n, 0);
    for (int pos = 0; pos < n; ++pos) folds.fold_of_row[order[pos]] = pos % k;
    return folds;
}

}  // namespace h2pc
