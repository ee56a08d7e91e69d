#include "bnet/learning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace bnet {

namespace {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

// State index of every structure variable in every record.
struct EncodedData {
    std::vector<std::vector<std::uint32_t>> columns;  // [variable][record]
};

EncodedData encode(const NetworkStructure& structure, const RecordSet& data) {
    if (data.rows.empty())
        throw Error(ErrorCode::validation_error, "dataset has no records");
    EncodedData encoded;
    for (const auto& var : structure.variables) {
        auto col = std::find(data.columns.begin(), data.columns.end(), var.name);
        if (col == data.columns.end())
            throw Error(ErrorCode::schema_error, "dataset has no column for variable '" + var.name + "'", var.name);
        std::size_t c = static_cast<std::size_t>(col - data.columns.begin());
        std::unordered_map<std::string_view, std::uint32_t> lookup;
        for (std::size_t s = 0; s < var.states.size(); ++s)
            lookup.emplace(var.states[s], static_cast<std::uint32_t>(s));

        std::vector<std::uint32_t> values(data.rows.size());
        for (std::size_t r = 0; r < data.rows.size(); ++r) {
            const auto& row = data.rows[r];
            if (c >= row.size())
                throw Error(ErrorCode::validation_error, "record " + std::to_string(r + 1) + " is missing a cell",
                            "row " + std::to_string(r + 1));
            auto it = lookup.find(row[c]);
            if (it == lookup.end())
                throw Error(ErrorCode::unknown_symbol,
                            "unknown state '" + row[c] + "' for variable '" + var.name + "' in record " +
                                std::to_string(r + 1),
                            var.name);
            values[r] = it->second;
        }
        encoded.columns.push_back(std::move(values));
    }
    return encoded;
}

}  // namespace

RecordSet parse_csv(std::string_view text) {
    RecordSet records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == text.npos ? text.npos : end - pos);
        pos = end == text.npos ? text.size() : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        auto cells = split_line(line);
        for (const auto& cell : cells)
            if (cell.empty())
                throw Error(ErrorCode::parse_error, "empty cell on line " + std::to_string(line_no),
                            "line " + std::to_string(line_no));
        if (records.columns.empty()) {
            records.columns = std::move(cells);
            continue;
        }
        if (cells.size() != records.columns.size())
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(records.columns.size()),
                        "line " + std::to_string(line_no));
        records.rows.push_back(std::move(cells));
    }
    if (records.columns.empty())
        throw Error(ErrorCode::parse_error, "CSV has no header line", "line 1");
    return records;
}

void write_csv(std::ostream& out, const RecordSet& records) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(records.columns);
    for (const auto& row : records.rows)
        line(row);
}

std::string to_csv(const RecordSet& records) {
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

FitResult fit_parameters(const NetworkStructure& structure, const RecordSet& data, double smoothing,
                         std::string name) {
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing))
        throw Error(ErrorCode::usage_error, "smoothing must be a finite value >= 0");
    // Catch structural problems before touching the data.
    topological_order(structure);
    auto encoded = encode(structure, data);

    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < structure.variables.size(); ++i)
        index.emplace(structure.variables[i].name, i);

    NetworkDefinition def;
    def.name = std::move(name);
    def.structure = structure;
    std::vector<UnseenConfiguration> unseen;

    for (std::size_t v = 0; v < structure.variables.size(); ++v) {
        const Variable& child = structure.variables[v];
        Cpt cpt;
        cpt.child = child.name;
        cpt.parents = structure.parents_of(child.name);

        std::vector<std::size_t> parent_idx, parent_card;
        std::size_t configs = 1;
        for (const auto& p : cpt.parents) {
            auto it = index.find(p);
            if (it == index.end())
                throw Error(ErrorCode::validation_error, "edge references undeclared variable '" + p + "'", p);
            parent_idx.push_back(it->second);
            parent_card.push_back(structure.variables[it->second].cardinality());
            configs *= parent_card.back();
        }

        const std::size_t k = child.cardinality();
        std::vector<double> counts(configs * k, 0.0);
        std::vector<std::size_t> parent_states(parent_idx.size());
        for (std::size_t r = 0; r < data.rows.size(); ++r) {
            for (std::size_t j = 0; j < parent_idx.size(); ++j)
                parent_states[j] = encoded.columns[parent_idx[j]][r];
            std::size_t row = mixed_radix_index(parent_card, parent_states);
            counts[row * k + encoded.columns[v][r]] += 1.0;
        }

        for (std::size_t row = 0; row < configs; ++row) {
            double total = 0.0;
            for (std::size_t s = 0; s < k; ++s)
                total += counts[row * k + s];
            if (total == 0.0)
                unseen.push_back({child.name, row});
            double denom = total + smoothing * static_cast<double>(k);
            std::vector<double> probs(k);
            for (std::size_t s = 0; s < k; ++s)
                probs[s] = denom > 0.0 ? (counts[row * k + s] + smoothing) / denom : 1.0 / static_cast<double>(k);
            cpt.rows.push_back(std::move(probs));
        }
        def.cpts.push_back(std::move(cpt));
    }
    return {BayesianNetwork::create(std::move(def)), std::move(unseen)};
}

BayesianNetwork mle_fit(const NetworkStructure& structure, const RecordSet& data, double smoothing) {
    return fit_parameters(structure, data, smoothing).network;
}

NaiveBayesModel::NaiveBayesModel(Variable class_variable, std::vector<Variable> attributes,
                                 std::vector<double> prior,
                                 std::vector<std::vector<std::vector<double>>> conditionals)
    : m_class(std::move(class_variable)),
      m_attributes(std::move(attributes)),
      m_prior(std::move(prior)),
      m_conditionals(std::move(conditionals)) {}

BayesianNetwork NaiveBayesModel::to_network() const {
    NetworkDefinition def;
    def.name = "naive-bayes";
    def.structure.variables.push_back(m_class);
    def.cpts.push_back({m_class.name, {}, {m_prior}});
    for (std::size_t a = 0; a < m_attributes.size(); ++a) {
        def.structure.variables.push_back(m_attributes[a]);
        def.structure.edges.push_back({m_class.name, m_attributes[a].name});
        def.cpts.push_back({m_attributes[a].name, {m_class.name}, m_conditionals[a]});
    }
    return BayesianNetwork::create(std::move(def));
}

NaiveBayesModel naive_bayes_train(const Variable& class_variable, std::span<const Variable> attributes,
                                  const RecordSet& data, double smoothing) {
    if (attributes.empty())
        throw Error(ErrorCode::usage_error, "naive Bayes needs at least one attribute");
    NetworkStructure star;
    star.variables.push_back(class_variable);
    for (const auto& a : attributes) {
        star.variables.push_back(a);
        star.edges.push_back({class_variable.name, a.name});
    }
    auto fitted = mle_fit(star, data, smoothing);

    std::vector<std::vector<std::vector<double>>> conditionals;
    for (std::size_t a = 0; a < attributes.size(); ++a)
        conditionals.push_back(fitted.cpt(a + 1).rows);
    return NaiveBayesModel(class_variable, {attributes.begin(), attributes.end()}, fitted.cpt(0).rows.front(),
                           std::move(conditionals));
}

Classification naive_bayes_predict(const NaiveBayesModel& model, const Evidence& attributes) {
    const auto& attrs = model.attributes();
    for (const auto& [name, state] : attributes) {
        bool known = std::any_of(attrs.begin(), attrs.end(), [&](const Variable& a) { return a.name == name; });
        if (!known)
            throw Error(ErrorCode::unknown_symbol, "'" + name + "' is not an attribute of the classifier", name);
    }
    std::vector<std::size_t> observed;
    for (const auto& a : attrs) {
        const std::string* state = attributes.find(a.name);
        if (!state)
            throw Error(ErrorCode::usage_error, "attribute '" + a.name + "' is unbound", a.name);
        auto idx = a.find_state(*state);
        if (!idx)
            throw Error(ErrorCode::unknown_symbol, "unknown state '" + *state + "' for variable '" + a.name + "'",
                        a.name);
        observed.push_back(*idx);
    }

    const Variable& cls = model.class_variable();
    std::vector<double> scores(cls.cardinality());
    double z = 0.0;
    std::size_t best = 0;
    for (std::size_t c = 0; c < cls.cardinality(); ++c) {
        double score = model.prior()[c];
        for (std::size_t a = 0; a < attrs.size(); ++a)
            score *= model.conditional(a)[c][observed[a]];
        scores[c] = score;
        z += score;
        if (score > scores[best])
            best = c;
    }
    if (z <= 0.0)
        throw Error(ErrorCode::impossible_evidence, "every class has zero probability for these attributes");
    for (double& s : scores)
        s /= z;
    return {cls.states[best], Distribution{cls.name, cls.states, std::move(scores)}};
}

RecordSet forward_sample(const BayesianNetwork& net, std::size_t n, std::uint64_t seed) {
    if (n == 0)
        throw Error(ErrorCode::usage_error, "sample count must be at least 1");
    std::mt19937_64 rng(seed);
    RecordSet out;
    for (const auto& v : net.variables())
        out.columns.push_back(v.name);
    out.rows.reserve(n);

    std::vector<int> states(net.size(), -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v : net.topological_order()) {
            const auto& row = net.cpt(v).rows[net.row_index(v, states)];
            // 53 high bits → uniform double in [0, 1).
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            std::size_t chosen = row.size();
            double cumulative = 0.0;
            for (std::size_t s = 0; s < row.size(); ++s) {
                cumulative += row[s];
                if (u < cumulative) {
                    chosen = s;
                    break;
                }
            }
            if (chosen == row.size()) {
                // Rounding left u above the final cumulative sum.
                chosen = row.size() - 1;
                while (chosen > 0 && row[chosen] == 0.0)
                    --chosen;
            }
            states[v] = static_cast<int>(chosen);
        }
        std::vector<std::string> record;
        record.reserve(net.size());
        for (std::size_t v = 0; v < net.size(); ++v)
            record.push_back(net.variable(v).states[static_cast<std::size_t>(states[v])]);
        out.rows.push_back(std::move(record));
    }
    return out;
}

}  // namespace bnet
