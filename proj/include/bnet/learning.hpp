#ifndef BNET_LEARNING_HPP
#define BNET_LEARNING_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnet/inference.hpp"
#include "bnet/network.hpp"

namespace bnet {

/// Complete-data table of state labels, one column per variable.
struct RecordSet {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const RecordSet&) const = default;
};

/// CSV without quoting: header of variable names, then one line of state
/// labels per record. Throws parse_error on ragged or empty cells.
RecordSet parse_csv(std::string_view text);
void write_csv(std::ostream& out, const RecordSet& records);
std::string to_csv(const RecordSet& records);

/// A parent configuration never seen in the training data.
struct UnseenConfiguration {
    std::string child;
    std::size_t row = 0;
};

struct FitResult {
    BayesianNetwork network;
    std::vector<UnseenConfiguration> unseen;
};

/// Laplace-smoothed frequency estimates for every CPT of `structure`.
/// P(child=s | cfg) = (n(s, cfg) + smoothing) / (n(cfg) + smoothing * |child|),
/// and a uniform row wherever that denominator is zero.
FitResult fit_parameters(const NetworkStructure& structure, const RecordSet& data, double smoothing,
                         std::string name = "fitted");

BayesianNetwork mle_fit(const NetworkStructure& structure, const RecordSet& data, double smoothing);

/// Class variable with conditionally independent attributes.
class NaiveBayesModel {
public:
    NaiveBayesModel(Variable class_variable, std::vector<Variable> attributes, std::vector<double> prior,
                    std::vector<std::vector<std::vector<double>>> conditionals);

    const Variable& class_variable() const { return m_class; }
    const std::vector<Variable>& attributes() const { return m_attributes; }
    const std::vector<double>& prior() const { return m_prior; }
    /// P(attribute `a` = s | class = c) as conditional(a)[c][s].
    const std::vector<std::vector<double>>& conditional(std::size_t attribute) const {
        return m_conditionals[attribute];
    }
    /// Number of P(a_i | v_j) tables: attributes × class states.
    std::size_t conditional_table_count() const { return m_attributes.size() * m_class.cardinality(); }

    /// The equivalent star-shaped network (class → each attribute).
    BayesianNetwork to_network() const;

private:
    Variable m_class;
    std::vector<Variable> m_attributes;
    std::vector<double> m_prior;
    std::vector<std::vector<std::vector<double>>> m_conditionals;
};

NaiveBayesModel naive_bayes_train(const Variable& class_variable, std::span<const Variable> attributes,
                                  const RecordSet& data, double smoothing);

struct Classification {
    std::string label;
    Distribution posterior;
};

/// argmax_v P(v) Π P(a_i | v), first class state on ties. Every attribute must
/// be bound; throws impossible_evidence when all class scores are zero.
Classification naive_bayes_predict(const NaiveBayesModel& model, const Evidence& attributes);

/// Ancestral sampling in topological order with a std::mt19937_64 seeded by
/// `seed`. Columns follow variable declaration order.
RecordSet forward_sample(const BayesianNetwork& net, std::size_t n, std::uint64_t seed);

}  // namespace bnet

#endif  // BNET_LEARNING_HPP
