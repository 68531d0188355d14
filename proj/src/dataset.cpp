#include "banditlab/envs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "banditlab/errors.hpp"

namespace banditlab::envs {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !s.empty();
}

ColumnKind parse_kind(const std::string& word, const std::string& name) {
    if (word == "numeric") return ColumnKind::kNumeric;
    if (word == "ordinal") return ColumnKind::kOrdinal;
    if (word == "categorical") return ColumnKind::kCategorical;
    if (word == "label") return ColumnKind::kLabel;
    if (word == "reward") return ColumnKind::kReward;
    throw DataError("schema: unknown column kind '" + word + "' for column '" + name + "'");
}

void standardize(std::vector<double>& col) {
    const double n = static_cast<double>(col.size());
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= n;  // population variance
    const double sd = std::sqrt(var);
    if (sd == 0.0) {
        for (double& v : col) v = 0.0;
        return;
    }
    for (double& v : col) v = (v - mean) / sd;
}

}  // namespace

Schema Schema::parse(std::istream& in) {
    Schema schema;
    std::string line;
    std::size_t labels = 0;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string name, kind_word, extra;
        ss >> name >> kind_word;
        if (kind_word.empty() || (ss >> extra)) {
            throw DataError("schema: expected '<name> <kind>' but got '" + line + "'");
        }
        SchemaColumn col{name, parse_kind(kind_word, name)};
        if (col.kind == ColumnKind::kLabel) ++labels;
        schema.columns.push_back(std::move(col));
    }
    if (schema.columns.empty()) throw DataError("schema: no columns");
    if (labels > 1) throw DataError("schema: more than one label column");
    return schema;
}

Schema Schema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("schema: cannot open '" + path + "'");
    return parse(in);
}

nd::Tensor DatasetTable::context_row(std::size_t i) const {
    nd::Tensor t({context_dim});
    std::copy_n(features.begin() + static_cast<std::ptrdiff_t>(i * context_dim),
                context_dim, t.data.begin());
    return t;
}

double DatasetTable::reward_at(std::size_t i, std::size_t a) const {
    return rewards[i * num_reward_cols + a];
}

DatasetTable load_table(std::istream& data, const Schema& schema) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(data, line)) {
        line = trim(line);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw DataError("dataset: no rows");

    const char delim = lines.front().find('\t') != std::string::npos ? '\t' : ',';
    const std::size_t num_cols = schema.columns.size();

    std::vector<std::vector<std::string>> raw;
    raw.reserve(lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r) {
        auto fields = split(lines[r], delim);
        if (r == 0 && fields.size() == num_cols) {
            bool is_header = true;
            for (std::size_t c = 0; c < num_cols; ++c) {
                if (fields[c] != schema.columns[c].name) {
                    is_header = false;
                    break;
                }
            }
            if (is_header) continue;
        }
        if (fields.size() != num_cols) {
            throw DataError("dataset: row " + std::to_string(r + 1) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(num_cols));
        }
        raw.push_back(std::move(fields));
    }
    if (raw.empty()) throw DataError("dataset: no data rows");
    const std::size_t n = raw.size();

    DatasetTable table;
    table.num_rows = n;

    std::vector<std::vector<double>> feature_cols;
    for (std::size_t c = 0; c < num_cols; ++c) {
        const auto& col = schema.columns[c];
        switch (col.kind) {
            case ColumnKind::kNumeric: {
                std::vector<double> vals(n);
                for (std::size_t r = 0; r < n; ++r) {
                    if (!parse_double(raw[r][c], vals[r])) {
                        throw DataError("dataset: column '" + col.name + "' row " +
                                        std::to_string(r + 1) + ": '" + raw[r][c] +
                                        "' is not numeric");
                    }
                }
                standardize(vals);
                feature_cols.push_back(std::move(vals));
                table.feature_names.push_back(col.name);
                break;
            }
            case ColumnKind::kOrdinal: {
                std::vector<double> vals(n);
                bool all_numeric = true;
                for (std::size_t r = 0; r < n && all_numeric; ++r) {
                    all_numeric = parse_double(raw[r][c], vals[r]);
                }
                if (!all_numeric) {
                    std::map<std::string, double> codes;
                    for (std::size_t r = 0; r < n; ++r) codes[raw[r][c]] = 0.0;
                    double next = 0.0;
                    for (auto& [_, code] : codes) code = next++;
                    for (std::size_t r = 0; r < n; ++r) vals[r] = codes.at(raw[r][c]);
                }
                standardize(vals);
                feature_cols.push_back(std::move(vals));
                table.feature_names.push_back(col.name);
                break;
            }
            case ColumnKind::kCategorical: {
                std::map<std::string, std::size_t> values;
                for (std::size_t r = 0; r < n; ++r) values[raw[r][c]] = 0;
                std::size_t next = 0;
                for (auto& [_, idx] : values) idx = next++;
                std::vector<std::vector<double>> onehot(values.size(),
                                                        std::vector<double>(n, 0.0));
                for (std::size_t r = 0; r < n; ++r) {
                    onehot[values.at(raw[r][c])][r] = 1.0;
                }
                for (const auto& [value, idx] : values) {
                    feature_cols.push_back(std::move(onehot[idx]));
                    table.feature_names.push_back(col.name + "=" + value);
                }
                break;
            }
            case ColumnKind::kLabel: {
                std::map<std::string, int> classes;
                for (std::size_t r = 0; r < n; ++r) classes[raw[r][c]] = 0;
                int next = 0;
                for (auto& [name, idx] : classes) {
                    idx = next++;
                    table.label_names.push_back(name);
                }
                table.labels.resize(n);
                for (std::size_t r = 0; r < n; ++r) {
                    table.labels[r] = classes.at(raw[r][c]);
                }
                break;
            }
            case ColumnKind::kReward: {
                std::vector<double> vals(n);
                for (std::size_t r = 0; r < n; ++r) {
                    if (!parse_double(raw[r][c], vals[r])) {
                        throw DataError("dataset: reward column '" + col.name + "' row " +
                                        std::to_string(r + 1) + " is not numeric");
                    }
                }
                // Reward columns keep their raw scale.
                table.rewards.resize(table.rewards.size() + n);
                ++table.num_reward_cols;
                // Stored column-major for now; interleaved below.
                std::copy(vals.begin(), vals.end(),
                          table.rewards.end() - static_cast<std::ptrdiff_t>(n));
                break;
            }
        }
    }

    table.context_dim = feature_cols.size();
    if (table.context_dim == 0) throw DataError("dataset: no feature columns");
    table.features.resize(n * table.context_dim);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < table.context_dim; ++c) {
            table.features[r * table.context_dim + c] = feature_cols[c][r];
        }
    }

    if (table.num_reward_cols > 0) {
        // Transpose the provisional column blocks into row-major order.
        std::vector<double> by_row(n * table.num_reward_cols);
        for (std::size_t a = 0; a < table.num_reward_cols; ++a) {
            for (std::size_t r = 0; r < n; ++r) {
                by_row[r * table.num_reward_cols + a] = table.rewards[a * n + r];
            }
        }
        table.rewards = std::move(by_row);
    }

    for (double v : table.features) {
        if (!std::isfinite(v)) throw DataError("dataset: non-finite encoded feature");
    }
    for (double v : table.rewards) {
        if (!std::isfinite(v)) throw DataError("dataset: non-finite reward");
    }
    return table;
}

DatasetTable load_table(const std::string& data_path, const std::string& schema_path) {
    Schema schema = Schema::load(schema_path);
    std::ifstream in(data_path);
    if (!in) throw DataError("dataset: cannot open '" + data_path + "'");
    return load_table(in, schema);
}

}  // namespace banditlab::envs
