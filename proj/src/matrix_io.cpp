// SPDX-License-Identifier: Apache-2.0

#include "pdnn/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

static_assert(std::endian::native == std::endian::little, "channel dumps assume a little-endian host");

constexpr std::array<char, 8> kMagic{'P', 'D', 'N', 'N', 'C', 'H', '0', '1'};

template <typename T> void put(std::ostream &os, T value)
{
    os.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T> T get(std::istream &is)
{
    T value{};
    if (!is.read(reinterpret_cast<char *>(&value), sizeof(T)))
        throw InvalidArgument("channel dump: truncated input");
    return value;
}

} // namespace

void write_matrix_csv(std::ostream &os, const ComplexMatrix &m)
{
    os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << (j ? "," : "") << m(i, j).real() << ',' << m(i, j).imag();
        os << '\n';
    }
}

ComplexMatrix read_matrix_csv(std::istream &is)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
        {
            double value = 0.0;
            const char *end = cell.data() + cell.size();
            const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
            if (ec != std::errc{} || ptr != end)
                throw InvalidArgument("matrix csv: not a number: '" + cell + "'");
            fields.push_back(value);
        }
        if (fields.size() % 2 != 0 || (!rows.empty() && fields.size() != rows.front().size()))
            throw InvalidArgument("matrix csv: ragged row or odd field count");
        rows.push_back(std::move(fields));
    }
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size() / 2);
    ComplexMatrix m(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i)
        for (Eigen::Index j = 0; j < n_cols; ++j)
            m(i, j) = cplx(rows[i][2 * j], rows[i][2 * j + 1]);
    return m;
}

void write_channel_binary(std::ostream &os, const ChannelRealization &channel)
{
    os.write(kMagic.data(), kMagic.size());
    put<std::uint64_t>(os, channel.seed);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(channel.h.rows()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(channel.h.cols()));
    for (Eigen::Index i = 0; i < channel.h.rows(); ++i)
        for (Eigen::Index j = 0; j < channel.h.cols(); ++j)
        {
            put<double>(os, channel.h(i, j).real());
            put<double>(os, channel.h(i, j).imag());
        }
}

ChannelRealization read_channel_binary(std::istream &is)
{
    std::array<char, 8> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw InvalidArgument("channel dump: bad magic");
    ChannelRealization out;
    out.seed = get<std::uint64_t>(is);
    const auto rows = get<std::uint32_t>(is);
    const auto cols = get<std::uint32_t>(is);
    out.h.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j)
        {
            const double re = get<double>(is);
            out.h(i, j) = cplx(re, get<double>(is));
        }
    return out;
}

} // namespace pdnn
