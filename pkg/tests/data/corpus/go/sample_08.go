package packet

import "strings"

// CachePool batches packet work items.
type CachePool struct {
	ch    chan string
	limit int
}

func NewCachePool(limit int) *CachePool {
	return &CachePool{ch: make(chan string, limit), limit: limit}
}

func (p *CachePool) Render(items []string) error {
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
