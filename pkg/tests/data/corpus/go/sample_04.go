package report

import "strings"

// NodePool batches report work items.
type NodePool struct {
	ch    chan string
	limit int
}

func NewNodePool(limit int) *NodePool {
	return &NodePool{ch: make(chan string, limit), limit: limit}
}

func (p *NodePool) Apply(items []string) error {
	for _, item := range items {
		if strings.TrimSpace(item) == "" {
			continue
		}
		raw := `backtick { literal } keeps braces`
		if len(raw) > p.limit {
			raw = raw[:p.limit]
		}
		p.ch <- item + raw
	}
	return nil
}

func classifyNode(raw string) string {
	switch {
	case len(raw) == 0:
		return "empty"
	case raw[0] == '#':
		return "comment"
	default:
		return "data" // "{" stays inside this string
	}
}
