#include "eqfs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "eqfs/error.hpp"
#include "eqfs/random.hpp"

namespace eqfs {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_number(const std::string& cell, double& value) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last && std::isfinite(value);
}

}  // namespace

LabelColumn LabelColumn::parse(const std::string& text) {
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }))
        return {static_cast<std::size_t>(std::stoull(text))};
    return {text};
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(LoadError::Kind::missing_file, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), label);
}

Dataset parse_csv(const std::string& content, const LabelColumn& label) {
    std::vector<std::string> lines;
    {
        std::istringstream in(content);
        std::string line;
        while (std::getline(in, line))
            if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw LoadError(LoadError::Kind::missing_header, "empty CSV: no header row");

    const auto header = split_fields(lines.front());
    double probe = 0.0;
    if (std::all_of(header.begin(), header.end(), [&](const std::string& f) { return parse_number(f, probe); }))
        throw LoadError(LoadError::Kind::missing_header, "first row is numeric; a header row is required");

    std::size_t label_col = 0;
    if (const auto* name = std::get_if<std::string>(&label.selector)) {
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) throw LoadError(LoadError::Kind::missing_label_column, "no column named '" + *name + "'");
        label_col = static_cast<std::size_t>(it - header.begin());
    } else {
        label_col = std::get<std::size_t>(label.selector);
        if (label_col >= header.size())
            throw LoadError(LoadError::Kind::missing_label_column,
                            "label index " + std::to_string(label_col) + " beyond " +
                                std::to_string(header.size()) + " columns");
    }

    Dataset data;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_col) data.feature_names.push_back(header[c]);
    const std::size_t n = data.feature_names.size();
    if (n == 0) throw LoadError(LoadError::Kind::missing_header, "no feature columns");

    std::map<std::string, int> class_index;
    data.features = Matrix(lines.size() - 1, n);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        if (fields.size() != header.size())
            throw LoadError(LoadError::Kind::ragged_row, "row " + std::to_string(r + 1) + " has " +
                                                             std::to_string(fields.size()) + " fields, expected " +
                                                             std::to_string(header.size()));
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_col) {
                if (fields[c].empty())
                    throw LoadError(LoadError::Kind::non_numeric_cell, "missing label at row " + std::to_string(r + 1));
                auto [it, fresh] = class_index.emplace(fields[c], static_cast<int>(class_index.size()));
                if (fresh) data.class_names.push_back(fields[c]);
                data.labels.push_back(it->second);
                continue;
            }
            double v = 0.0;
            if (!parse_number(fields[c], v))
                throw LoadError(LoadError::Kind::non_numeric_cell, "non-numeric cell '" + fields[c] + "' at row " +
                                                                       std::to_string(r + 1) + ", column '" +
                                                                       header[c] + "'");
            data.features(r - 1, out_col++) = v;
        }
    }
    if (data.class_names.size() < 2)
        throw LoadError(LoadError::Kind::too_few_classes, "label column holds fewer than 2 classes");
    data.digest = fnv1a_hex(content);
    return data;
}

Dataset make_dataset(Matrix features, std::vector<int> labels, std::vector<std::string> feature_names) {
    if (labels.size() != features.rows()) throw ContractError("label count differs from row count");
    Dataset data;
    if (feature_names.empty())
        for (std::size_t c = 0; c < features.cols(); ++c) feature_names.push_back("f" + std::to_string(c));
    data.feature_names = std::move(feature_names);
    const int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    for (int k = 0; k < classes; ++k) data.class_names.push_back(std::to_string(k));

    std::ostringstream bytes;
    bytes.precision(17);
    for (std::size_t r = 0; r < features.rows(); ++r) {
        bytes << labels[r];
        for (double v : features.row(r)) bytes << ',' << v;
        bytes << '\n';
    }
    data.digest = fnv1a_hex(bytes.str());
    data.features = std::move(features);
    data.labels = std::move(labels);
    return data;
}

SplitDataset split_rows(const Dataset& data, std::vector<std::size_t> train_rows, std::vector<std::size_t> test_rows) {
    const std::size_t n = data.features.cols();
    SplitDataset s;
    s.class_count = data.class_count();
    s.train = Matrix(train_rows.size(), n);
    s.test = Matrix(test_rows.size(), n);
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        std::ranges::copy(data.features.row(train_rows[i]), s.train.row(i).begin());
        s.train_labels.push_back(data.labels[train_rows[i]]);
    }
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
        std::ranges::copy(data.features.row(test_rows[i]), s.test.row(i).begin());
        s.test_labels.push_back(data.labels[test_rows[i]]);
    }
    s.train_rows = std::move(train_rows);
    s.test_rows = std::move(test_rows);

    s.mean.assign(n, 0.0);
    s.stddev.assign(n, 0.0);
    const auto rows = static_cast<double>(s.train.rows());
    for (std::size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < s.train.rows(); ++r) sum += s.train(r, c);
        const double mu = rows > 0 ? sum / rows : 0.0;
        double ss = 0.0;
        for (std::size_t r = 0; r < s.train.rows(); ++r) ss += (s.train(r, c) - mu) * (s.train(r, c) - mu);
        s.mean[c] = mu;
        s.stddev[c] = rows > 0 ? std::sqrt(ss / rows) : 0.0;
    }

    auto standardize = [&](const Matrix& m) {
        Matrix out(m.rows(), n);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < n; ++c) {
                const double centered = m(r, c) - s.mean[c];
                out(r, c) = s.stddev[c] > 0.0 ? centered / s.stddev[c] : centered;
            }
        return out;
    };
    s.train_standardized = standardize(s.train);
    s.test_standardized = standardize(s.test);
    return s;
}

SplitDataset stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw SplitError("test fraction must lie in (0, 1)");
    const int classes = data.class_count();
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
    for (std::size_t r = 0; r < data.rows(); ++r) members.at(static_cast<std::size_t>(data.labels[r])).push_back(r);
    for (int k = 0; k < classes; ++k)
        if (members[static_cast<std::size_t>(k)].size() < 2)
            throw SplitError("class '" + data.class_names[static_cast<std::size_t>(k)] + "' has fewer than 2 rows");

    Rng rng(seed);
    std::vector<std::size_t> take(static_cast<std::size_t>(classes));
    std::size_t allocated = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        std::shuffle(members[k].begin(), members[k].end(), rng);
        take[k] = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(members[k].size())));
        allocated += take[k];
    }

    const auto target = static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(data.rows())));
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return members[a].size() > members[b].size(); });
    for (std::size_t i = 0; allocated < target; ++i) {
        const std::size_t k = order[i % order.size()];
        if (take[k] + 1 < members[k].size()) {
            ++take[k];
            ++allocated;
        }
        if (i > 4 * order.size() * data.rows()) throw SplitError("cannot reach requested test size");
    }

    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t k = 0; k < members.size(); ++k)
        for (std::size_t i = 0; i < members[k].size(); ++i) (i < take[k] ? test_rows : train_rows).push_back(members[k][i]);
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return split_rows(data, std::move(train_rows), std::move(test_rows));
}

Matrix apply_mask(const Matrix& rows, const FeatureMask& mask) {
    if (static_cast<std::size_t>(mask.width()) != rows.cols())
        throw ContractError("mask width " + std::to_string(mask.width()) + " differs from " +
                            std::to_string(rows.cols()) + " columns");
    const auto cols = mask.selected();
    Matrix out(rows.rows(), cols.size());
    for (std::size_t r = 0; r < rows.rows(); ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = rows(r, static_cast<std::size_t>(cols[j]));
    return out;
}

}  // namespace eqfs
