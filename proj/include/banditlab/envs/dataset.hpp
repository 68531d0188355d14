#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "banditlab/ndcore/tensor.hpp"

namespace banditlab::envs {

// How a raw column is turned into model input:
//   numeric      parsed as a double, standardized
//   ordinal      integer-coded (numerically when all values parse, otherwise
//                by sorted distinct string), then standardized
//   categorical  one-hot expanded, one 0/1 column per distinct value
//   label        class target; exactly one per schema, not part of the context
//   reward       per-action reward column; kept unstandardized
enum class ColumnKind { kNumeric, kOrdinal, kCategorical, kLabel, kReward };

struct SchemaColumn {
    std::string name;
    ColumnKind kind;
};

struct Schema {
    std::vector<SchemaColumn> columns;

    // One column per line: "<name> <kind>".  '#' starts a comment.
    static Schema parse(std::istream& in);
    static Schema load(const std::string& path);
};

// Fully encoded table.  Feature columns are standardized with population
// statistics computed over the whole table (so a column holding {2, 4}
// becomes {-1, +1}); one-hot columns are left as 0/1.
struct DatasetTable {
    std::size_t num_rows = 0;
    std::size_t context_dim = 0;
    std::vector<double> features;  // row-major [num_rows x context_dim]
    std::vector<std::string> feature_names;

    std::vector<int> labels;  // empty when the schema has no label column
    std::vector<std::string> label_names;

    std::size_t num_reward_cols = 0;
    std::vector<double> rewards;  // row-major [num_rows x num_reward_cols]

    nd::Tensor context_row(std::size_t i) const;
    double reward_at(std::size_t i, std::size_t a) const;
};

// The delimiter is sniffed from the first line (tab if present, else comma);
// a leading header row matching the schema names is skipped.
DatasetTable load_table(std::istream& data, const Schema& schema);
DatasetTable load_table(const std::string& data_path, const std::string& schema_path);

}  // namespace banditlab::envs
