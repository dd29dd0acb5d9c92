// Copyright (c) 2026 The txcluster developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef TXCLUSTER_UNION_FIND_H
#define TXCLUSTER_UNION_FIND_H

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace txcluster {

/** Disjoint sets over 0..n-1 with path compression and union by size. */
class UnionFind
{
public:
    explicit UnionFind(std::size_t n = 0) : m_parent(n), m_size(n, 1), m_components(n)
    {
        for (std::size_t i = 0; i < n; ++i) m_parent[i] = static_cast<std::uint32_t>(i);
    }

    std::size_t size() const noexcept { return m_parent.size(); }
    std::size_t component_count() const noexcept { return m_components; }

    std::size_t find(std::size_t x)
    {
        std::size_t root = x;
        while (m_parent[root] != root) root = m_parent[root];
        while (m_parent[x] != root) {
            const std::size_t next = m_parent[x];
            m_parent[x] = static_cast<std::uint32_t>(root);
            x = next;
        }
        return root;
    }

    /** Returns false when @p a and @p b were already joined. */
    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (m_size[a] < m_size[b]) std::swap(a, b);
        m_parent[b] = static_cast<std::uint32_t>(a);
        m_size[a] += m_size[b];
        --m_components;
        return true;
    }

    std::size_t component_size(std::size_t x) { return m_size[find(x)]; }

private:
    std::vector<std::uint32_t> m_parent;
    std::vector<std::uint32_t> m_size;
    std::size_t m_components;
};

} // namespace txcluster

#endif // TXCLUSTER_UNION_FIND_H
