#include "banditlab/envs/environments.hpp"

#include <algorithm>
#include <cmath>

#include "banditlab/errors.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::envs {

namespace {

class TableEnvBase : public BanditEnvironment {
  public:
    TableEnvBase(std::shared_ptr<const DatasetTable> table, std::uint64_t seed,
                 std::string label)
        : table_(std::move(table)), rng_(seed), label_(std::move(label)) {
        if (!table_ || table_->num_rows == 0) {
            throw ConfigError("environment '" + label_ + "': empty table");
        }
    }

    std::size_t context_dim() const override { return table_->context_dim; }
    const std::string& id() const override { return label_; }

  protected:
    std::size_t draw_row() { return rng_.uniform_int(table_->num_rows); }

    std::shared_ptr<const DatasetTable> table_;
    Rng rng_;
    std::string label_;
};

class MushroomEnv : public TableEnvBase {
  public:
    MushroomEnv(std::shared_ptr<const DatasetTable> table, std::size_t harmful_class,
                std::uint64_t seed, std::string label)
        : TableEnvBase(std::move(table), seed, std::move(label)),
          harmful_class_(harmful_class) {
        if (table_->labels.empty() || table_->label_names.size() != 2) {
            throw ConfigError("environment '" + label_ + "': needs a binary label column");
        }
        if (harmful_class_ >= 2) {
            throw ConfigError("environment '" + label_ + "': harmful class out of range");
        }
    }

    std::size_t num_actions() const override { return 2; }

    Round next() override {
        const std::size_t row = draw_row();
        const bool harmful =
            static_cast<std::size_t>(table_->labels[row]) == harmful_class_;
        Round r;
        r.context = table_->context_row(row);
        r.rewards = nd::Tensor({2});
        r.expected_rewards = nd::Tensor({2});
        r.rewards[0] = 0.0;
        r.expected_rewards[0] = 0.0;
        if (harmful) {
            r.rewards[1] = rng_.uniform() < 0.5 ? 5.0 : -35.0;
            r.expected_rewards[1] = -15.0;
        } else {
            r.rewards[1] = 5.0;
            r.expected_rewards[1] = 5.0;
        }
        r.optimal_expected = harmful ? 0.0 : 5.0;
        return r;
    }

  private:
    std::size_t harmful_class_;
};

class ClassificationEnv : public TableEnvBase {
  public:
    ClassificationEnv(std::shared_ptr<const DatasetTable> table, std::uint64_t seed,
                      std::string label)
        : TableEnvBase(std::move(table), seed, std::move(label)) {
        if (table_->labels.empty() || table_->label_names.size() < 2) {
            throw ConfigError("environment '" + label_ + "': needs a label column");
        }
    }

    std::size_t num_actions() const override { return table_->label_names.size(); }

    Round next() override {
        const std::size_t row = draw_row();
        const std::size_t c = num_actions();
        Round r;
        r.context = table_->context_row(row);
        r.rewards = nd::Tensor({c});
        r.expected_rewards = nd::Tensor({c});
        r.rewards[static_cast<std::size_t>(table_->labels[row])] = 1.0;
        r.expected_rewards.data = r.rewards.data;
        r.optimal_expected = 1.0;
        return r;
    }
};

class TableRewardEnv : public TableEnvBase {
  public:
    TableRewardEnv(std::shared_ptr<const DatasetTable> table, std::uint64_t seed,
                   std::string label)
        : TableEnvBase(std::move(table), seed, std::move(label)) {
        if (table_->num_reward_cols < 2) {
            throw ConfigError("environment '" + label_ +
                              "': needs at least two reward columns");
        }
    }

    std::size_t num_actions() const override { return table_->num_reward_cols; }

    Round next() override {
        const std::size_t row = draw_row();
        const std::size_t c = num_actions();
        Round r;
        r.context = table_->context_row(row);
        r.rewards = nd::Tensor({c});
        for (std::size_t a = 0; a < c; ++a) r.rewards[a] = table_->reward_at(row, a);
        r.expected_rewards = r.rewards;
        r.optimal_expected = *std::max_element(r.rewards.data.begin(), r.rewards.data.end());
        return r;
    }
};

class WheelEnv : public BanditEnvironment {
  public:
    WheelEnv(double delta, std::uint64_t seed, std::string label)
        : delta_(delta), rng_(seed), label_(std::move(label)) {
        if (!(delta > 0.0) || !(delta < 1.0)) {
            throw ConfigError("wheel: delta must lie in (0, 1)");
        }
    }

    std::size_t context_dim() const override { return 2; }
    std::size_t num_actions() const override { return 5; }
    const std::string& id() const override { return label_; }

    Round next() override {
        double x, y;
        do {
            x = rng_.uniform(-1.0, 1.0);
            y = rng_.uniform(-1.0, 1.0);
        } while (x * x + y * y > 1.0);

        Round r;
        r.context = nd::Tensor({2}, {x, y});
        r.expected_rewards = nd::Tensor({5}, {1.2, 1.0, 1.0, 1.0, 1.0});
        const bool outside = std::sqrt(x * x + y * y) > delta_;
        if (outside) {
            const std::size_t quadrant =
                1 + (x < 0.0 ? 1u : 0u) + (y < 0.0 ? 2u : 0u);
            r.expected_rewards[quadrant] = 50.0;
        }
        r.rewards = nd::Tensor({5});
        for (std::size_t a = 0; a < 5; ++a) {
            r.rewards[a] = rng_.normal(r.expected_rewards[a], kRewardStd);
        }
        r.optimal_expected = outside ? 50.0 : 1.2;
        return r;
    }

  private:
    static constexpr double kRewardStd = 0.01;
    double delta_;
    Rng rng_;
    std::string label_;
};

}  // namespace

std::size_t find_harmful_class(const DatasetTable& table) {
    if (table.label_names.size() != 2) {
        throw ConfigError("harmful-class detection needs a binary label");
    }
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string& name = table.label_names[i];
        if (name == "p" || name.rfind("poison", 0) == 0) return i;
    }
    return 1;
}

std::unique_ptr<BanditEnvironment> make_mushroom_env(
    std::shared_ptr<const DatasetTable> table, std::size_t harmful_class,
    std::uint64_t seed, std::string label) {
    return std::make_unique<MushroomEnv>(std::move(table), harmful_class, seed,
                                         std::move(label));
}

std::unique_ptr<BanditEnvironment> make_classification_env(
    std::shared_ptr<const DatasetTable> table, std::uint64_t seed, std::string label) {
    return std::make_unique<ClassificationEnv>(std::move(table), seed, std::move(label));
}

std::unique_ptr<BanditEnvironment> make_table_reward_env(
    std::shared_ptr<const DatasetTable> table, std::uint64_t seed, std::string label) {
    return std::make_unique<TableRewardEnv>(std::move(table), seed, std::move(label));
}

std::unique_ptr<BanditEnvironment> make_wheel_env(double delta, std::uint64_t seed,
                                                  std::string label) {
    return std::make_unique<WheelEnv>(delta, seed, std::move(label));
}

}  // namespace banditlab::envs
