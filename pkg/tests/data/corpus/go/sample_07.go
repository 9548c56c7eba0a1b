package packet

import "strings"

// BatchPool batches packet work items.
type BatchPool struct {
	ch    chan string
	limit int
}

func NewBatchPool(limit int) *BatchPool {
	return &BatchPool{ch: make(chan string, limit), limit: limit}
}

func (p *BatchPool) Scan(items []string) error {
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

func classifyBatch(raw string) string {
	switch {
	case len(raw) == 0:
		return "empty"
	case raw[0] == '#':
		return "comment"
	default:
		return "data" // "{" stays inside this string
	}
}
