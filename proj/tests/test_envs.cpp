#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "banditlab/envs/dataset.hpp"
#include "banditlab/envs/environments.hpp"
#include "banditlab/envs/synthetic.hpp"
#include "banditlab/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace banditlab;
using namespace banditlab::envs;

namespace {

std::shared_ptr<const DatasetTable> table_from(const std::string& schema_text,
                                               const std::string& data_text) {
    std::istringstream schema_in(schema_text);
    Schema schema = Schema::parse(schema_in);
    std::istringstream data_in(data_text);
    return std::make_shared<const DatasetTable>(load_table(data_in, schema));
}

}  // namespace

TEST_CASE("loader standardizes numeric columns with population statistics") {
    auto table = table_from("height numeric\nkind label\n", "2,a\n4,b\n");
    CHECK(table->context_dim == 1);
    CHECK(table->features == std::vector<double>{-1.0, 1.0});
    CHECK(table->labels == std::vector<int>{0, 1});
    CHECK(table->label_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("loader expands categoricals to one-hot and keeps rewards raw") {
    auto table = table_from(
        "color categorical\nscore numeric\nr0 reward\nr1 reward\n",
        "red,1,10,0\nblue,2,20,5\nred,3,30,2\n");
    // Distinct values sorted: blue, red.
    CHECK(table->context_dim == 3);
    CHECK(table->feature_names ==
          std::vector<std::string>{"color=blue", "color=red", "score"});
    CHECK(table->features[0 * 3 + 0] == 0.0);  // row 0 is red
    CHECK(table->features[0 * 3 + 1] == 1.0);
    CHECK(table->features[1 * 3 + 0] == 1.0);  // row 1 is blue
    CHECK(table->num_reward_cols == 2);
    CHECK(table->reward_at(1, 0) == 20.0);
    CHECK(table->reward_at(2, 1) == 2.0);
    // score column {1,2,3}: population sd = sqrt(2/3).
    const double sd = std::sqrt(2.0 / 3.0);
    CHECK(table->features[0 * 3 + 2] == doctest::Approx(-1.0 / sd));
    CHECK(table->features[1 * 3 + 2] == doctest::Approx(0.0));
}

TEST_CASE("loader integer-codes string ordinals in sorted order") {
    auto table = table_from("grade ordinal\ny label\n", "a,0\nc,1\nb,0\nc,1\n");
    // codes: a=0, b=1, c=2 -> values {0,2,1,2}, mean 1.25.
    const double mean = 1.25;
    double var = ((0 - mean) * (0 - mean) + (2 - mean) * (2 - mean) +
                  (1 - mean) * (1 - mean) + (2 - mean) * (2 - mean)) /
                 4.0;
    const double sd = std::sqrt(var);
    CHECK(table->features[0] == doctest::Approx((0 - mean) / sd));
    CHECK(table->features[1] == doctest::Approx((2 - mean) / sd));
    CHECK(table->features[2] == doctest::Approx((1 - mean) / sd));
}

TEST_CASE("loader honors tabs, headers, and rejects bad input") {
    auto table = table_from("x numeric\ny label\n", "x\ty\n1\tu\n3\tv\n");
    CHECK(table->num_rows == 2);
    CHECK(table->features == std::vector<double>{-1.0, 1.0});

    std::istringstream schema_in("x numeric\ny label\n");
    Schema schema = Schema::parse(schema_in);
    std::istringstream ragged("1,u\n2\n");
    CHECK_THROWS_AS(load_table(ragged, schema), DataError);
    std::istringstream not_num("one,u\ntwo,v\n");
    CHECK_THROWS_AS(load_table(not_num, schema), DataError);
    std::istringstream empty("");
    CHECK_THROWS_AS(load_table(empty, schema), DataError);

    std::istringstream bad_kind("x floating\n");
    CHECK_THROWS_AS(Schema::parse(bad_kind), DataError);
    std::istringstream two_labels("a label\nb label\n");
    CHECK_THROWS_AS(Schema::parse(two_labels), DataError);
}

TEST_CASE("mushroom environment reward rules") {
    auto table = table_from("x numeric\nclass label\n",
                            "1,e\n2,p\n3,e\n4,p\n5,e\n6,p\n");
    CHECK(find_harmful_class(*table) == 1);  // "p"
    auto env = make_mushroom_env(table, 1, 99);
    CHECK(env->context_dim() == 1);
    CHECK(env->num_actions() == 2);

    int harmful_seen = 0, safe_seen = 0;
    std::vector<double> harmful_eat;
    for (int t = 0; t < 20000; ++t) {
        Round r = env->next();
        CHECK(r.rewards[0] == 0.0);
        CHECK(r.expected_rewards[0] == 0.0);
        if (r.expected_rewards[1] == 5.0) {
            ++safe_seen;
            CHECK(r.rewards[1] == 5.0);
            CHECK(r.optimal_expected == 5.0);
        } else {
            ++harmful_seen;
            CHECK(r.expected_rewards[1] == -15.0);
            CHECK((r.rewards[1] == 5.0 || r.rewards[1] == -35.0));
            CHECK(r.optimal_expected == 0.0);
            harmful_eat.push_back(r.rewards[1]);
        }
    }
    CHECK(safe_seen > 0);
    CHECK(harmful_seen > 0);
    // Realized harmful consumption averages to its conditional mean.
    auto ms = oracle::mean_se(harmful_eat);
    CHECK(std::fabs(ms.mean - (-15.0)) < 3.0 * ms.se);
}

TEST_CASE("classification environment emits one-hot rewards") {
    auto table = table_from("x numeric\ny label\n", "1,u\n2,v\n3,w\n");
    auto env = make_classification_env(table, 7, "toy");
    CHECK(env->num_actions() == 3);
    for (int t = 0; t < 200; ++t) {
        Round r = env->next();
        double sum = 0.0;
        for (double v : r.rewards.data) {
            CHECK((v == 0.0 || v == 1.0));
            sum += v;
        }
        CHECK(sum == 1.0);
        CHECK(r.optimal_expected == 1.0);
        CHECK(r.expected_rewards.data == r.rewards.data);
    }
}

TEST_CASE("table-reward environment reads rows verbatim") {
    auto table = table_from("x numeric\nr0 reward\nr1 reward\nr2 reward\n",
                            "1,3,1,2\n2,0,5,1\n");
    auto env = make_table_reward_env(table, 3, "joke");
    CHECK(env->num_actions() == 3);
    for (int t = 0; t < 50; ++t) {
        Round r = env->next();
        const bool row0 = r.rewards[0] == 3.0;
        if (row0) {
            CHECK(r.rewards.data == std::vector<double>{3, 1, 2});
            CHECK(r.optimal_expected == 3.0);
        } else {
            CHECK(r.rewards.data == std::vector<double>{0, 5, 1});
            CHECK(r.optimal_expected == 5.0);
        }
    }
}

TEST_CASE("wheel environment geometry and payouts") {
    const double delta = 0.5;
    auto env = make_wheel_env(delta, 4242);
    CHECK(env->context_dim() == 2);
    CHECK(env->num_actions() == 5);

    const int n = 40000;
    int inside = 0;
    for (int t = 0; t < n; ++t) {
        Round r = env->next();
        const double x = r.context[0], y = r.context[1];
        const double radius = std::sqrt(x * x + y * y);
        CHECK(radius <= 1.0);
        CHECK(r.expected_rewards[0] == 1.2);
        if (radius <= delta) {
            ++inside;
            CHECK(r.optimal_expected == 1.2);
            for (int a = 1; a < 5; ++a) CHECK(r.expected_rewards[a] == 1.0);
        } else {
            CHECK(r.optimal_expected == 50.0);
            const std::size_t quadrant = 1 + (x < 0 ? 1 : 0) + (y < 0 ? 2 : 0);
            int big = 0;
            for (std::size_t a = 1; a < 5; ++a) {
                if (r.expected_rewards[a] == 50.0) {
                    ++big;
                    CHECK(a == quadrant);
                } else {
                    CHECK(r.expected_rewards[a] == 1.0);
                }
            }
            CHECK(big == 1);
        }
        for (std::size_t a = 0; a < 5; ++a) {
            CHECK(std::fabs(r.rewards[a] - r.expected_rewards[a]) < 0.01 * 6);
        }
    }
    // P(inside) = delta^2 for uniform draws on the disk.
    const double p_hat = static_cast<double>(inside) / n;
    const double se = std::sqrt(delta * delta * (1 - delta * delta) / n);
    CHECK(std::fabs(p_hat - delta * delta) < 4.0 * se);

    CHECK_THROWS_AS(make_wheel_env(0.0, 1), ConfigError);
    CHECK_THROWS_AS(make_wheel_env(1.0, 1), ConfigError);
}

TEST_CASE("environments replay identically under the same seed") {
    auto table = table_from("x numeric\nclass label\n", "1,e\n2,p\n3,e\n4,p\n");
    auto a = make_mushroom_env(table, 1, 555);
    auto b = make_mushroom_env(table, 1, 555);
    for (int t = 0; t < 300; ++t) {
        Round ra = a->next();
        Round rb = b->next();
        CHECK(ra.context.data == rb.context.data);
        CHECK(ra.rewards.data == rb.rewards.data);
    }
    auto c = make_mushroom_env(table, 1, 556);
    bool any_diff = false;
    for (int t = 0; t < 300 && !any_diff; ++t) {
        any_diff = a->next().context.data != c->next().context.data;
    }
    CHECK(any_diff);
}

TEST_CASE("synthetic mushroom table is balanced and linearly labelled") {
    auto table = synth_mushroom_table(2000, 22, 31);
    CHECK(table.num_rows == 2000);
    CHECK(table.context_dim == 22);
    CHECK(table.label_names == std::vector<std::string>{"edible", "poisonous"});
    int harmful = 0;
    for (int label : table.labels) harmful += label;
    CHECK(harmful > 600);
    CHECK(harmful < 1400);
    // Columns are standardized: population mean ~0, sd ~1.
    for (std::size_t c = 0; c < table.context_dim; ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t r = 0; r < table.num_rows; ++r) {
            mean += table.features[r * 22 + c];
        }
        mean /= 2000.0;
        for (std::size_t r = 0; r < table.num_rows; ++r) {
            const double u = table.features[r * 22 + c] - mean;
            var += u * u;
        }
        var /= 2000.0;
        CHECK(std::fabs(mean) < 1e-9);
        CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Determinism.
    auto again = synth_mushroom_table(2000, 22, 31);
    CHECK(again.features == table.features);
    CHECK(again.labels == table.labels);
}

TEST_CASE("synthetic blob table respects class frequencies") {
    std::vector<double> probs{0.78, 0.055, 0.033, 0.033, 0.033, 0.033, 0.033};
    auto table = synth_blobs_table(5000, 16, probs, 3.0, 17);
    CHECK(table.context_dim == 16);
    CHECK(table.label_names.size() == 7);
    std::vector<int> counts(7, 0);
    for (int label : table.labels) counts[static_cast<std::size_t>(label)]++;
    const double p0 = static_cast<double>(counts[0]) / 5000.0;
    const double se = std::sqrt(0.78 * 0.22 / 5000.0);
    CHECK(std::fabs(p0 - 0.78) < 4.0 * se);
    for (int c : counts) CHECK(c > 0);

    CHECK_THROWS_AS(synth_blobs_table(100, 4, {0.5, 0.4}, 1.0, 1), ConfigError);
}
