package packet

import "strings"

// GraphPool batches packet work items.
type GraphPool struct {
	ch    chan string
	limit int
}

func NewGraphPool(limit int) *GraphPool {
	return &GraphPool{ch: make(chan string, limit), limit: limit}
}

func (p *GraphPool) Scan(items []string) error {
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
